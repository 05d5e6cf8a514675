#include "allostery/fp_linear.hpp"

#include <algorithm>
#include <map>

#include "allostery/errors.hpp"
#include "allostery/rational.hpp"

namespace allostery {

PrimeField::PrimeField(unsigned p) : p_(p) {
  if (p < 2 || p > 251 || !is_prime(p)) {
    throw DomainError("F_p arithmetic needs a prime p <= 251");
  }
  reduce_.resize(p * p + p);
  for (unsigned x = 0; x < reduce_.size(); ++x) {
    reduce_[x] = static_cast<Residue>(x % p);
  }
  inverse_.assign(p, 0);
  for (unsigned a = 1; a < p; ++a) {
    for (unsigned b = 1; b < p; ++b) {
      if (a * b % p == 1) {
        inverse_[a] = static_cast<Residue>(b);
        break;
      }
    }
  }
}

void PrimeField::axpy(FpVector& a, Residue f, const SparseRow& b) const {
  if (f == 0) {
    return;
  }
  for (const auto& e : b) {
    a[e.column] = reduce_[a[e.column] + static_cast<unsigned>(f) * e.value];
  }
}

void PrimeField::axpy(FpVector& a, Residue f, const FpVector& b) const {
  if (f == 0) {
    return;
  }
  const Residue* tbl = reduce_.data();
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] = tbl[a[j] + static_cast<unsigned>(f) * b[j]];
  }
}

Residue PrimeField::dot(const FpVector& a, const FpVector& b) const {
  unsigned long long acc = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    acc += static_cast<unsigned>(a[j]) * b[j];
  }
  return static_cast<Residue>(acc % p_);
}

Residue PrimeField::dot(const FpVector& a, const SparseRow& b) const {
  unsigned long long acc = 0;
  for (const auto& e : b) {
    acc += static_cast<unsigned>(a[e.column]) * e.value;
  }
  return static_cast<Residue>(acc % p_);
}

SparseRow to_sparse(const FpVector& v) {
  SparseRow row;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] != 0) {
      row.push_back({static_cast<std::uint32_t>(j), v[j]});
    }
  }
  return row;
}

FpVector to_dense(const SparseRow& row, std::size_t columns) {
  FpVector v(columns, 0);
  for (const auto& e : row) {
    v[e.column] = e.value;
  }
  return v;
}

RowEchelon::RowEchelon(unsigned p, std::size_t columns)
    : field_(p), columns_(columns), row_of_column_(columns, -1) {}

bool RowEchelon::insert(const SparseRow& row) {
  SparseRow rest = reduce_sparse(row);
  if (rest.empty()) {
    return false;
  }
  const std::size_t c = rest.front().column;
  const Residue s = field_.inv(rest.front().value);
  for (auto& e : rest) {
    e.value = field_.mul(e.value, s);
  }
  row_of_column_[c] = static_cast<std::ptrdiff_t>(rows_.size());
  rows_.push_back(std::move(rest));
  pivots_.push_back(c);
  free_dirty_ = true;
  classes_dirty_ = true;
  return true;
}

SparseRow RowEchelon::reduce_sparse(const SparseRow& row) const {
  std::map<std::uint32_t, Residue> acc;
  auto add = [&](std::uint32_t column, Residue value) {
    auto [it, fresh] = acc.try_emplace(column, value);
    if (!fresh) {
      it->second = field_.add(it->second, value);
      if (it->second == 0) {
        acc.erase(it);
      }
    }
  };
  for (const auto& e : row) {
    if (e.column >= columns_) {
      throw DomainError("row entry beyond the column count");
    }
    Residue v = field_.from_int(e.value);
    if (v != 0) {
      add(e.column, v);
    }
  }
  SparseRow out;
  while (!acc.empty()) {
    auto it = acc.begin();
    const auto [c, v] = *it;
    acc.erase(it);
    auto r = row_of_column_[c];
    if (r < 0) {
      out.push_back({c, v});
      continue;
    }
    const Residue coef = field_.neg(v);
    for (const auto& e : rows_[static_cast<std::size_t>(r)]) {
      if (e.column != c) {
        add(e.column, field_.mul(coef, e.value));
      }
    }
  }
  return out;
}

void RowEchelon::refresh_classes() const {
  if (!classes_dirty_) {
    return;
  }
  refresh_free();
  pivot_classes_.assign(columns_, {});
  std::map<std::uint32_t, Residue> acc;
  for (std::size_t c = columns_; c-- > 0;) {
    auto r = row_of_column_[c];
    if (r < 0) {
      continue;
    }
    acc.clear();
    for (const auto& e : rows_[static_cast<std::size_t>(r)]) {
      if (e.column == c) {
        continue;
      }
      const Residue coef = field_.neg(e.value);
      auto add = [&](std::uint32_t column, Residue value) {
        Residue& slot = acc[column];
        slot = field_.add(slot, field_.mul(coef, value));
      };
      if (row_of_column_[e.column] < 0) {
        add(static_cast<std::uint32_t>(free_index_[e.column]), 1);
      } else {
        for (const auto& f : pivot_classes_[e.column]) {
          add(f.column, f.value);
        }
      }
    }
    auto& out = pivot_classes_[c];
    for (const auto& [column, value] : acc) {
      if (value != 0) {
        out.push_back({column, value});
      }
    }
  }
  classes_dirty_ = false;
}

SparseRow RowEchelon::project_sparse(const SparseRow& row) const {
  refresh_classes();
  std::map<std::uint32_t, Residue> acc;
  for (const auto& e : row) {
    if (e.column >= columns_) {
      throw DomainError("row entry beyond the column count");
    }
    const Residue v = field_.from_int(e.value);
    if (row_of_column_[e.column] < 0) {
      Residue& slot = acc[static_cast<std::uint32_t>(free_index_[e.column])];
      slot = field_.add(slot, v);
    } else {
      for (const auto& f : pivot_classes_[e.column]) {
        Residue& slot = acc[f.column];
        slot = field_.add(slot, field_.mul(v, f.value));
      }
    }
  }
  SparseRow out;
  for (const auto& [column, value] : acc) {
    if (value != 0) {
      out.push_back({column, value});
    }
  }
  return out;
}

FpVector RowEchelon::reduce(FpVector v) const {
  for (std::size_t c = 0; c < columns_; ++c) {
    if (v[c] != 0 && row_of_column_[c] >= 0) {
      field_.axpy(v, field_.neg(v[c]), rows_[static_cast<std::size_t>(row_of_column_[c])]);
    }
  }
  return v;
}

void RowEchelon::refresh_free() const {
  if (!free_dirty_) {
    return;
  }
  free_columns_.clear();
  free_index_.assign(columns_, -1);
  for (std::size_t j = 0; j < columns_; ++j) {
    if (row_of_column_[j] < 0) {
      free_index_[j] = static_cast<std::ptrdiff_t>(free_columns_.size());
      free_columns_.push_back(j);
    }
  }
  free_dirty_ = false;
}

const std::vector<std::size_t>& RowEchelon::free_columns() const {
  refresh_free();
  return free_columns_;
}

FpVector RowEchelon::project(const FpVector& v) const {
  refresh_free();
  FpVector r = reduce(v);
  FpVector out(free_columns_.size());
  for (std::size_t k = 0; k < free_columns_.size(); ++k) {
    out[k] = r[free_columns_[k]];
  }
  return out;
}

FpVector RowEchelon::project_unit(std::size_t column) const {
  FpVector e(columns_, 0);
  e[column] = 1;
  return project(e);
}

bool RowEchelon::in_span(const FpVector& v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](Residue x) { return x == 0; });
}

FpVector RowEchelon::extend_functional(const FpVector& on_free) const {
  refresh_free();
  if (on_free.size() != free_columns_.size()) {
    throw DomainError("functional length differs from the quotient dimension");
  }
  FpVector f(columns_, 0);
  for (std::size_t k = 0; k < free_columns_.size(); ++k) {
    f[free_columns_[k]] = on_free[k];
  }
  for (std::size_t c = columns_; c-- > 0;) {
    auto r = row_of_column_[c];
    if (r < 0) {
      continue;
    }
    unsigned long long acc = 0;
    for (const auto& e : rows_[static_cast<std::size_t>(r)]) {
      if (e.column != c) {
        acc += static_cast<unsigned>(e.value) * f[e.column];
      }
    }
    f[c] = field_.neg(static_cast<Residue>(acc % field_.p()));
  }
  return f;
}

std::size_t fp_rank(std::vector<FpVector> rows, unsigned p) {
  PrimeField f(p);
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) {
      ++piv;
    }
    if (piv == rows.size()) {
      continue;
    }
    std::swap(rows[piv], rows[rank]);
    Residue s = f.inv(rows[rank][c]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      Residue e = rows[i][c];
      if (e != 0) {
        f.axpy(rows[i], f.neg(f.mul(e, s)), rows[rank]);
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace allostery
