#pragma once

#include <stdexcept>
#include <string>

namespace ggm {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotDecomposable : public Error {
 public:
  NotDecomposable() : Error("graph is not decomposable") {}
  explicit NotDecomposable(const std::string& what) : Error(what) {}
};

class NotSPD : public Error {
 public:
  explicit NotSPD(const std::string& what) : Error(what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

class TooLarge : public Error {
 public:
  explicit TooLarge(const std::string& what) : Error(what) {}
};

class DegenerateStats : public Error {
 public:
  explicit DegenerateStats(const std::string& what) : Error(what) {}
};

class NonFinite : public Error {
 public:
  explicit NonFinite(const std::string& what) : Error(what) {}
};

class MismatchedModel : public Error {
 public:
  explicit MismatchedModel(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int row, int col)
      : Error(what + " (row " + std::to_string(row) + ", col " + std::to_string(col) + ")"),
        detail_(what),
        row_(row),
        col_(col) {}
  const std::string& detail() const { return detail_; }
  int row() const { return row_; }
  int col() const { return col_; }

 private:
  std::string detail_;
  int row_;
  int col_;
};

class ZeroVariance : public Error {
 public:
  explicit ZeroVariance(int column)
      : Error("column " + std::to_string(column + 1) + " has zero variance"), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

class SingularScatter : public Error {
 public:
  explicit SingularScatter(const std::string& what) : Error(what) {}
};

}  // namespace ggm
