#include "symcoh/int_linalg.hpp"

#include <algorithm>
#include <cassert>

namespace symcoh::zlin {

std::string AbelianGroupStructure::to_string() const {
  if (is_trivial()) return "0";
  std::string s;
  auto append = [&s](const std::string& part) {
    if (!s.empty()) s += "+";
    s += part;
  };
  if (free_rank == 1)
    append("Z");
  else if (free_rank > 1)
    append("Z^" + std::to_string(free_rank));
  for (const auto& d : invariant_factors) append("Z/" + d.get_str());
  return s;
}

namespace {

// Position of a nonzero entry of minimal |value| in the active block
// [r0, rows) x [c0, cols); returns false if the block is zero.
bool min_pivot(const ZMat& m, std::size_t r0, std::size_t c0, std::size_t& pr,
               std::size_t& pc) {
  bool found = false;
  Int best;
  for (std::size_t r = r0; r < m.rows; ++r)
    for (std::size_t c = c0; c < m.cols; ++c) {
      const Int& v = m.at(r, c);
      if (v == 0) continue;
      Int av = abs(v);
      if (!found || av < best) {
        found = true;
        best = av;
        pr = r;
        pc = c;
      }
    }
  return found;
}

void swap_rows(ZMat& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(a, c), m.at(b, c));
}

void swap_cols(ZMat& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < m.rows; ++r) std::swap(m.at(r, a), m.at(r, b));
}

struct Transforms {
  ZMat* u = nullptr;      // collects row ops
  ZMat* u_inv = nullptr;  // collects the inverse column ops
};

void t_swap_rows(Transforms& t, std::size_t a, std::size_t b) {
  if (t.u) swap_rows(*t.u, a, b);
  if (t.u_inv) swap_cols(*t.u_inv, a, b);
}

// row a += c * row b  (and the inverse op on u_inv: col b -= c * col a)
void t_addmul_row(ZMat& m, Transforms& t, std::size_t a, const Int& c, std::size_t b) {
  for (std::size_t j = 0; j < m.cols; ++j) m.at(a, j) += c * m.at(b, j);
  if (t.u)
    for (std::size_t j = 0; j < t.u->cols; ++j) t.u->at(a, j) += c * t.u->at(b, j);
  if (t.u_inv)
    for (std::size_t i = 0; i < t.u_inv->rows; ++i)
      t.u_inv->at(i, b) -= c * t.u_inv->at(i, a);
}

void t_negate_row(ZMat& m, Transforms& t, std::size_t a) {
  for (std::size_t j = 0; j < m.cols; ++j) m.at(a, j) = -m.at(a, j);
  if (t.u)
    for (std::size_t j = 0; j < t.u->cols; ++j) t.u->at(a, j) = -t.u->at(a, j);
  if (t.u_inv)
    for (std::size_t i = 0; i < t.u_inv->rows; ++i)
      t.u_inv->at(i, a) = -t.u_inv->at(i, a);
}

std::vector<Int> smith_core(ZMat& m, Transforms t) {
  std::vector<Int> diag;
  std::size_t k = 0, limit = std::min(m.rows, m.cols);
  while (k < limit) {
    std::size_t pr, pc;
    if (!min_pivot(m, k, k, pr, pc)) break;
    swap_cols(m, k, pc);
    t_swap_rows(t, k, pr);
    swap_rows(m, k, pr);
  retry:
    // clear column k below the pivot
    for (std::size_t r = k + 1; r < m.rows; ++r) {
      if (m.at(r, k) == 0) continue;
      Int q = m.at(r, k) / m.at(k, k);  // truncated division keeps remainders small
      if (q != 0) t_addmul_row(m, t, r, -q, k);
      if (m.at(r, k) != 0) {
        // remainder smaller in magnitude than the pivot: swap up and restart
        t_swap_rows(t, k, r);
        swap_rows(m, k, r);
        goto retry;
      }
    }
    // clear row k to the right of the pivot
    for (std::size_t c = k + 1; c < m.cols; ++c) {
      if (m.at(k, c) == 0) continue;
      Int q = m.at(k, c) / m.at(k, k);
      if (q != 0)
        for (std::size_t r = 0; r < m.rows; ++r) m.at(r, c) -= q * m.at(r, k);
      if (m.at(k, c) != 0) {
        swap_cols(m, k, c);
        goto retry;
      }
    }
    // pivot must divide every remaining entry; if not, fold the offender in
    for (std::size_t r = k + 1; r < m.rows; ++r)
      for (std::size_t c = k + 1; c < m.cols; ++c)
        if (m.at(r, c) % m.at(k, k) != 0) {
          t_addmul_row(m, t, k, 1, r);
          goto retry;
        }
    if (m.at(k, k) < 0) t_negate_row(m, t, k);
    diag.push_back(m.at(k, k));
    ++k;
  }
  return diag;
}

}  // namespace

SmithResult smith(ZMat m) {
  Transforms none;
  auto diag = smith_core(m, none);
  return {diag, diag.size()};
}

SmithTransformResult smith_with_row_transform(ZMat m) {
  SmithTransformResult res;
  res.u = ZMat(m.rows, m.rows);
  res.u_inv = ZMat(m.rows, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    res.u.at(i, i) = 1;
    res.u_inv.at(i, i) = 1;
  }
  Transforms t{&res.u, &res.u_inv};
  res.factors = smith_core(m, t);
  res.rank = res.factors.size();
  return res;
}

AbelianGroupStructure cokernel_structure(std::size_t ambient_rank, const ZMat& gens) {
  assert(gens.rows == ambient_rank || gens.a.empty());
  AbelianGroupStructure s;
  if (gens.a.empty() || gens.cols == 0) {
    s.free_rank = ambient_rank;
    return s;
  }
  auto sm = smith(gens);
  s.free_rank = ambient_rank - sm.rank;
  for (const auto& d : sm.factors)
    if (d > 1) s.invariant_factors.push_back(d);
  return s;
}

KernelStream::KernelStream(std::size_t cols) : cols_(cols), u_(cols, cols) {
  for (std::size_t i = 0; i < cols; ++i) {
    u_.at(i, i) = 1;
    free_.push_back(std::uint32_t(i));
  }
}

void KernelStream::add_row(const std::vector<std::pair<std::uint32_t, Int>>& row) {
  if (free_.empty()) return;
  // values of the streamed row on the still-free transformed columns
  std::vector<Int> v(free_.size());
  bool nonzero = false;
  for (std::size_t j = 0; j < free_.size(); ++j) {
    Int s = 0;
    for (const auto& [c, val] : row) s += val * u_.at(c, free_[j]);
    if (s != 0) nonzero = true;
    v[j] = std::move(s);
  }
  if (!nonzero) return;
  // gcd-combine columns until a single nonzero value remains
  std::size_t lead = free_.size();
  for (std::size_t j = 0; j < free_.size(); ++j) {
    if (v[j] == 0) continue;
    if (lead == free_.size()) {
      lead = j;
      continue;
    }
    // combine columns free_[lead], free_[j]
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[lead].get_mpz_t(),
               v[j].get_mpz_t());
    Int a = v[lead] / g, b = v[j] / g;
    std::size_t cl = free_[lead], cj = free_[j];
    for (std::size_t r = 0; r < cols_; ++r) {
      Int x = u_.at(r, cl), y = u_.at(r, cj);
      u_.at(r, cl) = s * x + t * y;  // value g at this row
      u_.at(r, cj) = a * y - b * x;  // value 0
    }
    v[lead] = g;
    v[j] = 0;
  }
  // pin the leading column: it has a nonzero value on this row
  std::uint32_t pinned_col = free_[lead];
  (void)pinned_col;
  free_.erase(free_.begin() + std::ptrdiff_t(lead));
  ++pinned_;
}

std::vector<std::vector<Int>> KernelStream::kernel() const {
  std::vector<std::vector<Int>> basis;
  for (auto c : free_) {
    std::vector<Int> col(cols_);
    for (std::size_t r = 0; r < cols_; ++r) col[r] = u_.at(r, c);
    basis.push_back(std::move(col));
  }
  return basis;
}

bool solve_in_lattice(const ZMat& basis, const std::vector<Int>& b,
                      std::vector<Int>& y) {
  assert(basis.rows == b.size());
  std::size_t n = basis.rows, k = basis.cols;
  y.assign(k, 0);
  if (k == 0) {
    for (const auto& x : b)
      if (x != 0) return false;
    return true;
  }
  // column echelon with transform V: E = basis * V
  ZMat e = basis;
  ZMat v(k, k);
  for (std::size_t i = 0; i < k; ++i) v.at(i, i) = 1;
  std::vector<std::size_t> pivot_row(k, 0);
  std::size_t next = 0;
  for (std::size_t r = 0; r < n && next < k; ++r) {
    // combine columns next..k-1 so that at most one has a nonzero in row r
    std::size_t lead = k;
    for (std::size_t c = next; c < k; ++c) {
      if (e.at(r, c) == 0) continue;
      if (lead == k) {
        lead = c;
        continue;
      }
      Int g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), e.at(r, lead).get_mpz_t(),
                 e.at(r, c).get_mpz_t());
      Int a = e.at(r, lead) / g, bb = e.at(r, c) / g;
      for (std::size_t i = 0; i < n; ++i) {
        Int x = e.at(i, lead), yv = e.at(i, c);
        e.at(i, lead) = s * x + t * yv;
        e.at(i, c) = a * yv - bb * x;
      }
      for (std::size_t i = 0; i < k; ++i) {
        Int x = v.at(i, lead), yv = v.at(i, c);
        v.at(i, lead) = s * x + t * yv;
        v.at(i, c) = a * yv - bb * x;
      }
    }
    if (lead != k) {
      std::swap_ranges(&e.at(0, lead), &e.at(0, lead) + 1, &e.at(0, next));  // placeholder
      // swap full columns lead <-> next in e and v
      for (std::size_t i = 0; i < n; ++i) std::swap(e.at(i, lead), e.at(i, next));
      for (std::size_t i = 0; i < k; ++i) std::swap(v.at(i, lead), v.at(i, next));
      pivot_row[next] = r;
      ++next;
    }
  }
  // forward substitution in the staircase
  std::vector<Int> rem(b);
  std::vector<Int> z(k, 0);
  for (std::size_t c = 0; c < next; ++c) {
    std::size_t r = pivot_row[c];
    if (rem[r] % e.at(r, c) != 0) return false;
    z[c] = rem[r] / e.at(r, c);
    if (z[c] != 0)
      for (std::size_t i = 0; i < n; ++i) rem[i] -= z[c] * e.at(i, c);
  }
  for (const auto& x : rem)
    if (x != 0) return false;
  for (std::size_t i = 0; i < k; ++i) {
    Int s = 0;
    for (std::size_t c = 0; c < next; ++c) s += v.at(i, c) * z[c];
    y[i] = std::move(s);
  }
  return true;
}

}  // namespace symcoh::zlin
