#pragma once

// Column-oriented result table rendered as CSV with shortest round-trip
// number formatting, so reruns compare byte for byte.

#include <charconv>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rbmlab::cli {

inline std::string format_number(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class ResultTable {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  class Row {
   public:
    Row& add(double v) { return push(v); }
    Row& add(std::complex<double> v) {
      push(v.real());
      return push(v.imag());
    }
    Row& add(std::int64_t v) { return push(v); }
    Row& add(std::size_t v) { return push(static_cast<std::int64_t>(v)); }
    Row& add(int v) { return push(static_cast<std::int64_t>(v)); }
    Row& add(bool v) { return push(static_cast<std::int64_t>(v ? 1 : 0)); }
    Row& add(std::string v) { return push(std::move(v)); }
    Row& add(const char* v) { return push(std::string(v)); }

   private:
    friend class ResultTable;
    Row& push(Cell c) {
      cells_.push_back(std::move(c));
      return *this;
    }
    std::vector<Cell> cells_;
  };

  /// Expands "name:c" into name_re,name_im.
  static std::vector<std::string> expand(const std::vector<std::string>& spec) {
    std::vector<std::string> out;
    for (const auto& s : spec) {
      if (s.size() > 2 && s.compare(s.size() - 2, 2, ":c") == 0) {
        const auto base = s.substr(0, s.size() - 2);
        out.push_back(base + "_re");
        out.push_back(base + "_im");
      } else {
        out.push_back(s);
      }
    }
    return out;
  }

  Row& row() { return rows_.emplace_back(); }

  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
  [[nodiscard]] std::size_t size() const { return rows_.size(); }

  [[nodiscard]] std::string to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) out += ',';
      out += columns_[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
      if (r.cells_.size() != columns_.size())
        throw std::logic_error("result row has " + std::to_string(r.cells_.size()) +
                               " cells, table has " + std::to_string(columns_.size()) + " columns");
      for (std::size_t i = 0; i < r.cells_.size(); ++i) {
        if (i) out += ',';
        std::visit(
            [&](const auto& v) {
              using V = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<V, double>) {
                out += format_number(v);
              } else if constexpr (std::is_same_v<V, std::int64_t>) {
                out += std::to_string(v);
              } else {
                out += v;
              }
            },
            r.cells_[i]);
      }
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<Row> rows_;
};

}  // namespace rbmlab::cli
