#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace roughfem {

/// One certified inequality or identity.
struct CheckRecord {
  std::string case_id;
  std::string check;
  std::string reference;  // which estimate the check certifies
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // relative slack for bounds, absolute tolerance for identities
  bool identity = false;
  bool pass = false;
};

/// Collection of check records plus suite metadata.
///
/// Bound checks pass iff measured <= bound * (1 + slack); identity checks pass iff
/// |measured| <= slack.
class EstimateReport {
 public:
  void add_bound(std::string case_id, std::string check, std::string reference, double measured, double bound,
                 double slack);
  void add_identity(std::string case_id, std::string check, std::string reference, double residual, double tol);
  void append(const EstimateReport& other);
  void set_metadata(const std::string& key, const std::string& value) { metadata_[key] = value; }

  /// Stable sort by case id; records of one case keep their insertion order.
  void sort_by_case();

  bool all_pass() const;
  std::size_t failures() const;
  const std::vector<CheckRecord>& records() const { return records_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  /// Comma-separated table: optional "# generated ..." line, metadata comment lines, then
  /// the header case_id,check,paper_ref,measured,bound,slack,verdict.
  void write_csv(std::ostream& os, const std::string& timestamp = {}) const;
  void write_summary(std::ostream& os) const;

 private:
  std::vector<CheckRecord> records_;
  std::map<std::string, std::string> metadata_;
};

/// Formats with 17 significant digits ("inf"/"nan" spelled out).
std::string format_number(double value);

}  // namespace roughfem
