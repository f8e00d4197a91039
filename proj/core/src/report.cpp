#include "sharpconst/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace sharpconst::report {

using Json = nlohmann::json;

namespace {

// NaN and infinities have no JSON spelling; keep them readable as strings.
Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json pairs(const std::vector<std::pair<std::string, double>>& v) {
  Json o = Json::object();
  for (const auto& [k, x] : v) o[k] = num(x);
  return o;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

struct Report::Impl {
  Json body;
  Json timings = Json::object();
  bool pass = true;
  struct Row {
    std::string kind, id, field, quantity;
    double value, error;
    std::string provenance;
    std::string pass;
  };
  std::vector<Row> rows;
};

Report::Report(std::string command) : impl_(std::make_unique<Impl>()) {
  impl_->body = {{"schema_version", kSchemaVersion}, {"command", std::move(command)}, {"inputs", Json::object()}};
}
Report::~Report() = default;
Report::Report(Report&&) noexcept = default;
Report& Report::operator=(Report&&) noexcept = default;

void Report::input(const std::string& key, double v) { impl_->body["inputs"][key] = num(v); }
void Report::input(const std::string& key, const std::string& v) { impl_->body["inputs"][key] = v; }

void Report::constant(const std::string& name, double value, verify::Provenance provenance,
                      const std::vector<std::pair<std::string, double>>& args) {
  impl_->body["constants"].push_back(
      {{"name", name}, {"value", num(value)}, {"provenance", verify::to_string(provenance)}, {"args", pairs(args)}});
  impl_->rows.push_back({"constant", name, "", "value", value, 0.0, verify::to_string(provenance), ""});
}

void Report::eigen(const std::string& problem, const sl::EigenResult& r, double tol) {
  Json levels = Json::array();
  for (const auto& [elements, lambda] : r.mesh_levels) levels.push_back({{"elements", elements}, {"lambda", num(lambda)}});
  impl_->body["eigen"].push_back({{"problem", problem},
                                  {"lambda", num(r.lambda)},
                                  {"error_estimate", num(r.error_estimate)},
                                  {"tol", tol},
                                  {"provenance", "eigenvalue"},
                                  {"levels", levels}});
  impl_->rows.push_back({"eigen", problem, "", "lambda", r.lambda, r.error_estimate, "eigenvalue", ""});
}

void Report::ratio(const verify::RatioReport& r) {
  impl_->body["ratios"].push_back({{"case", r.case_id},
                                   {"field", r.field_id},
                                   {"lhs", num(r.lhs)},
                                   {"lhs_err", num(r.lhs_err)},
                                   {"rhs", num(r.rhs)},
                                   {"rhs_err", num(r.rhs_err)},
                                   {"ratio", num(r.ratio)},
                                   {"pass", r.pass},
                                   {"constant", {{"value", num(r.constant)}, {"provenance", verify::to_string(r.provenance)}}},
                                   {"extras", pairs(r.extras)},
                                   {"note", r.note}});
  impl_->rows.push_back({"ratio", r.case_id, r.field_id, "ratio", r.ratio, 0.0, verify::to_string(r.provenance),
                         r.pass ? "pass" : "fail"});
  impl_->pass = impl_->pass && r.pass;
}

void Report::sweep(const verify::SweepReport& s) {
  Json reps = Json::array();
  for (const auto& r : s.reports)
    reps.push_back({{"field", r.field_id},
                    {"ratio", num(r.ratio)},
                    {"lhs", num(r.lhs)},
                    {"lhs_err", num(r.lhs_err)},
                    {"rhs", num(r.rhs)},
                    {"rhs_err", num(r.rhs_err)},
                    {"extras", pairs(r.extras)}});
  const std::string prov = s.reports.empty() ? "closed_form" : verify::to_string(s.reports.front().provenance);
  impl_->body["sweeps"].push_back({{"case", s.case_id},
                                   {"family", s.family},
                                   {"schedule", s.schedule},
                                   {"reports", reps},
                                   {"nondecreasing", s.nondecreasing},
                                   {"final_ratio", num(s.final_ratio)},
                                   {"certified", s.certified},
                                   {"constant_provenance", prov}});
  for (size_t i = 0; i < s.reports.size(); ++i)
    impl_->rows.push_back({"sweep", s.case_id, s.reports[i].field_id, "ratio", s.reports[i].ratio, 0.0, prov,
                           i + 1 == s.reports.size() ? (s.certified ? "pass" : "fail") : ""});
  impl_->pass = impl_->pass && s.certified;
}

void Report::counterexample(const verify::CounterexampleReport& c) {
  Json pts = Json::array();
  for (size_t i = 0; i < c.eps.size(); ++i) pts.push_back({{"eps", c.eps[i]}, {"ratio", num(c.ratios[i])}});
  impl_->body["counterexamples"].push_back({{"case", "COUNTER-X1"},
                                            {"points", pts},
                                            {"growth", num(c.growth)},
                                            {"increasing", c.increasing},
                                            {"pass", c.pass}});
  for (size_t i = 0; i < c.eps.size(); ++i)
    impl_->rows.push_back({"counterexample", "COUNTER-X1", "eps=" + fmt(c.eps[i]), "ratio", c.ratios[i], 0.0,
                           "closed_form", ""});
  impl_->rows.push_back({"counterexample", "COUNTER-X1", "", "growth", c.growth, 0.0, "closed_form",
                         c.pass ? "pass" : "fail"});
  impl_->pass = impl_->pass && c.pass;
}

void Report::check(const std::string& name, const std::vector<std::pair<std::string, double>>& values, bool pass) {
  impl_->body["checks"].push_back({{"name", name}, {"values", pairs(values)}, {"pass", pass}});
  for (const auto& [k, v] : values) impl_->rows.push_back({"check", name, "", k, v, 0.0, "closed_form", ""});
  if (!values.empty()) impl_->rows.back().pass = pass ? "pass" : "fail";
  impl_->pass = impl_->pass && pass;
}

void Report::error(const std::string& what) {
  impl_->body["errors"].push_back(what);
  impl_->pass = false;
}

void Report::timing(const std::string& label, double seconds) { impl_->timings[label] = seconds; }
void Report::status(bool pass) { impl_->pass = impl_->pass && pass; }
bool Report::passed() const { return impl_->pass; }

std::string Report::json(bool with_metadata) const {
  nlohmann::json out = impl_->body;
  out["pass"] = impl_->pass;
  if (with_metadata) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    out["run_metadata"] = {{"timestamp", ts.str()}, {"timings_s", impl_->timings}};
  }
  return out.dump(2) + "\n";
}

std::string Report::csv() const {
  std::ostringstream os;
  os << "kind,id,field,quantity,value,error,provenance,verdict\n";
  for (const auto& r : impl_->rows)
    os << r.kind << ',' << csv_cell(r.id) << ',' << csv_cell(r.field) << ',' << csv_cell(r.quantity) << ','
       << fmt(r.value) << ',' << fmt(r.error) << ',' << r.provenance << ',' << r.pass << '\n';
  return os.str();
}

}  // namespace sharpconst::report
