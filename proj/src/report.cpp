#include "roughfem/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace roughfem {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void EstimateReport::add_bound(std::string case_id, std::string check, std::string reference, double measured,
                               double bound, double slack) {
  CheckRecord r{std::move(case_id), std::move(check), std::move(reference), measured, bound, slack, false, false};
  r.pass = std::isfinite(measured) && measured <= bound * (1.0 + slack);
  records_.push_back(std::move(r));
}

void EstimateReport::add_identity(std::string case_id, std::string check, std::string reference, double residual,
                                  double tol) {
  CheckRecord r{std::move(case_id), std::move(check), std::move(reference), residual, 0.0, tol, true, false};
  r.pass = std::abs(residual) <= tol;
  records_.push_back(std::move(r));
}

void EstimateReport::append(const EstimateReport& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  for (const auto& [k, v] : other.metadata_) metadata_.emplace(k, v);
}

void EstimateReport::sort_by_case() {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.case_id < b.case_id; });
}

bool EstimateReport::all_pass() const {
  return std::all_of(records_.begin(), records_.end(), [](const CheckRecord& r) { return r.pass; });
}

std::size_t EstimateReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const CheckRecord& r) { return !r.pass; }));
}

void EstimateReport::write_csv(std::ostream& os, const std::string& timestamp) const {
  if (!timestamp.empty()) os << "# generated " << timestamp << '\n';
  for (const auto& [k, v] : metadata_) os << "# " << k << '=' << v << '\n';
  os << "case_id,check,paper_ref,measured,bound,slack,verdict\n";
  for (const auto& r : records_) {
    os << r.case_id << ',' << r.check << ',' << r.reference << ',' << format_number(r.measured) << ','
       << (r.identity ? std::string("0") : format_number(r.bound)) << ',' << format_number(r.slack) << ','
       << (r.pass ? "pass" : "fail") << '\n';
  }
}

void EstimateReport::write_summary(std::ostream& os) const {
  for (const auto& [k, v] : metadata_) os << k << ": " << v << '\n';
  for (const auto& r : records_) {
    os << (r.pass ? "[pass] " : "[FAIL] ") << r.case_id << ' ' << r.check << ": measured " << format_number(r.measured);
    if (r.identity) {
      os << " (tol " << format_number(r.slack) << ")\n";
    } else {
      os << " <= " << format_number(r.bound) << " (slack " << format_number(r.slack) << ")\n";
    }
  }
  os << records_.size() - failures() << '/' << records_.size() << " checks passed\n";
}

}  // namespace roughfem
