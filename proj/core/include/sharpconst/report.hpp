#pragma once

// Machine-readable run reports.  JSON carries everything; CSV is a flat
// projection with one row per reported number.

#include <memory>
#include <string>
#include <vector>

#include "sharpconst/sl_eigen.hpp"
#include "sharpconst/verifier.hpp"

namespace sharpconst::report {

inline constexpr int kSchemaVersion = 1;

class Report {
 public:
  explicit Report(std::string command);
  ~Report();
  Report(Report&&) noexcept;
  Report& operator=(Report&&) noexcept;

  void input(const std::string& key, double v);
  void input(const std::string& key, const std::string& v);

  void constant(const std::string& name, double value, verify::Provenance provenance,
                const std::vector<std::pair<std::string, double>>& args = {});
  void eigen(const std::string& problem, const sl::EigenResult& r, double tol);
  void ratio(const verify::RatioReport& r);
  void sweep(const verify::SweepReport& s);
  void counterexample(const verify::CounterexampleReport& c);
  /// Named scalar check (capacity, isocapacitary gap, ...).
  void check(const std::string& name, const std::vector<std::pair<std::string, double>>& values, bool pass);
  void error(const std::string& what);

  void timing(const std::string& label, double seconds);
  void status(bool pass);
  bool passed() const;

  /// Without metadata the output is byte-identical across runs of the same config.
  std::string json(bool with_metadata = true) const;
  std::string csv() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sharpconst::report
