#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace termcoding {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 1;
  bool operator==(const SourceSpan&) const = default;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, SourceSpan span)
      : Error(format(msg, span)), message_(msg), span_(span) {}
  const SourceSpan& span() const { return span_; }
  const std::string& bare_message() const { return message_; }

 private:
  static std::string format(const std::string& msg, SourceSpan s) {
    return std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + msg;
  }
  std::string message_;
  SourceSpan span_;
};

enum class IssueKind {
  UnknownSort,
  UnknownSymbol,
  ArityMismatch,
  SortMismatch,
  DuplicateName,
  NeqSortMismatch,
  TrivialDisequality,
  NoSorts,
};

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(IssueKind k) const {
    for (const auto& i : issues)
      if (i.kind == k) return true;
    return false;
  }
  std::string summary() const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report)
      : Error(report.summary()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Raised when an enumeration would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace termcoding
