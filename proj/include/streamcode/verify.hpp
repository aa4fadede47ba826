#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamcode/construction.hpp"
#include "streamcode/matrix.hpp"

namespace streamcode {

/// Outcome of one parity-check or code-property condition.
struct ConditionReport {
  std::string id;        // "B1", "R1", "B2", "B2+1", "R2", "base-mds", ...
  int param = -1;        // l, when the condition is indexed by l
  IndexList columns;     // column set examined (subset for R1/R2 failures)
  bool pass = true;
  bool informational = false;
  std::string note;
  // On failure: coefficients c with sum_j c_j * col_j = 0 (or = target column), over
  // `columns`. Empty on success.
  Vector witness;
};

inline constexpr double kSubsetGuard = 1e5;

std::vector<ConditionReport> check_B1(const CodeTables& tables);
std::vector<ConditionReport> check_R1(const CodeTables& tables, double guard = kSubsetGuard);
// B-column reading, plus an informational (B+1)-column report per l.
std::vector<ConditionReport> check_B2(const CodeTables& tables);
std::vector<ConditionReport> check_R2(const CodeTables& tables, double guard = kSubsetGuard);

// Properties 8/9/10 (MDS sub-codes), the tail rank identity, the row-span containment
// of Minv's upper-right block, and nonzero f_ii(alpha).
std::vector<ConditionReport> check_code_properties(const CodeTables& tables);

struct RecoveryOptions {
  // Deadline shift applied to every symbol (negative = tighter than T).
  int deadline_slack = 0;
  // Random messages encoded per pattern.
  int messages_per_pattern = 2;
  uint64_t seed = 1;
  // Use only the oracle (for deadline-shifted negative controls).
  bool oracle_only = false;
  std::size_t pattern_guard = 200000;
};

struct RecoveryReport {
  std::size_t patterns = 0;
  std::size_t symbol_checks = 0;
  std::size_t failures = 0;
  std::size_t method_counts[5] = {0, 0, 0, 0, 0};
  std::optional<std::string> first_failure;
  bool pass() const { return failures == 0; }
};

// For every enumerated block pattern and every message index: the structured decoder
// recovers u[l] by its deadline and agrees with the oracle and the transmitted message.
RecoveryReport check_recovery_exhaustive(const CodeTables& tables, const RecoveryOptions& options = {});

bool all_pass(const std::vector<ConditionReport>& reports);

struct GridPointReport {
  CodeParams params;
  std::vector<ConditionReport> conditions;
  std::optional<RecoveryReport> recovery;
  bool pass() const;
};

struct GridOptions {
  int max_T = 9;
  bool recovery = true;
  unsigned threads = 0; // 0 = hardware concurrency
};

// Every (T, B, N) with max_T >= T >= B >= N >= 1, in lexicographic order.
std::vector<CodeParams> parameter_grid(int max_T);

std::vector<GridPointReport> run_grid(const GridOptions& options);

} // namespace streamcode
