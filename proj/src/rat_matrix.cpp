#include "commop/rat_matrix.hpp"

#include <stdexcept>

namespace commop {

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  for (const auto& r : rows) push_row(std::vector<Rational>(r));
}

void RatMatrix::push_row(const std::vector<Rational>& row) {
  if (rows_ == 0 && a_.empty()) cols_ = row.size();
  if (row.size() != cols_) throw std::invalid_argument("RatMatrix::push_row: width mismatch");
  a_.insert(a_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<Rational> RatMatrix::apply(const std::vector<Rational>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("RatMatrix::apply: size mismatch");
  std::vector<Rational> out(rows_);
  for (size_t r = 0; r < rows_; ++r) {
    mpq_class acc = 0;
    for (size_t c = 0; c < cols_; ++c) acc += (*this)(r, c).raw() * v[c].raw();
    out[r] = Rational(acc);
  }
  return out;
}

RowEchelon row_echelon(const RatMatrix& m) {
  const size_t nr = m.rows(), nc = m.cols();
  std::vector<std::vector<mpz_class>> a(nr, std::vector<mpz_class>(nc));
  for (size_t r = 0; r < nr; ++r) {
    mpz_class l = 1;
    for (size_t c = 0; c < nc; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).raw().get_den_mpz_t());
    for (size_t c = 0; c < nc; ++c) {
      const mpq_class& q = m(r, c).raw();
      a[r][c] = q.get_num() * (l / q.get_den());
    }
  }

  RowEchelon out;
  out.cols = nc;
  mpz_class prev = 1;
  size_t pr = 0;
  mpz_class t;
  for (size_t c = 0; c < nc && pr < nr; ++c) {
    size_t p = pr;
    while (p < nr && a[p][c] == 0) ++p;
    if (p == nr) continue;
    std::swap(a[p], a[pr]);
    const mpz_class piv = a[pr][c];
    for (size_t i = 0; i < nr; ++i) {
      if (i == pr) continue;
      const mpz_class f = a[i][c];
      for (size_t j = 0; j < nc; ++j) {
        t = piv * a[i][j] - f * a[pr][j];
        if (!mpz_divisible_p(t.get_mpz_t(), prev.get_mpz_t())) {
          throw std::logic_error("row_echelon: inexact fraction-free division");
        }
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = piv;
    out.pivot_columns.push_back(c);
    ++pr;
  }

  for (size_t i = 0; i < out.pivot_columns.size(); ++i) {
    const mpz_class& piv = a[i][out.pivot_columns[i]];
    std::vector<Rational> row(nc);
    for (size_t j = 0; j < nc; ++j) row[j] = Rational(mpq_class(a[i][j], piv));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<Rational>> nullspace(const RatMatrix& m) {
  const RowEchelon e = row_echelon(m);
  std::vector<bool> is_pivot(e.cols, false);
  for (size_t c : e.pivot_columns) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (size_t f = 0; f < e.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(e.cols, Rational(0));
    v[f] = Rational(1);
    for (size_t i = 0; i < e.pivot_columns.size(); ++i) v[e.pivot_columns[i]] = -e.rows[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace commop
