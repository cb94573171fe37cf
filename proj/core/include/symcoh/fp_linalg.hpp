#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "symcoh/ring.hpp"

namespace symcoh::fp {

struct Entry {
  std::uint32_t col;
  std::uint32_t val;  // in [1, p)
};
using SparseVec = std::vector<Entry>;  // sorted by col, no zeros

// Incremental row echelon over F_p.
//
// Rows are fed one at a time, reduced against the pivots collected so far,
// and inserted (normalized to leading coefficient 1) when a residual remains.
// Pivot order is the insertion order, so results are deterministic.
//
// The matrix may have `aug` extra bookkeeping columns appended after the
// `cols` main columns; augmented columns are carried through eliminations but
// never chosen as pivots. That is how coordinate solves are performed.
//
// Storage adapts to p: packed bits for p = 2, bytes for p < 16, 32-bit words
// otherwise. Rows are kept full-width from their leading column onward.
class Echelon {
 public:
  Echelon(std::uint32_t p, std::size_t cols, std::size_t aug = 0);
  ~Echelon();
  Echelon(Echelon&&) noexcept;
  Echelon& operator=(Echelon&&) noexcept;

  std::uint32_t p() const;
  std::size_t cols() const;
  std::size_t aug() const;

  // Returns true if the row created a new pivot.
  bool add_row(const SparseVec& row);

  std::size_t rank() const;

  // Residual of v after reduction against the current pivots.
  SparseVec reduce(const SparseVec& v) const;

  // Back-substitutes to reduced row echelon form. Quadratic in rank; meant
  // for matrices up to a few thousand columns.
  void interreduce();

  // Null space of the matrix whose rows were fed (main columns only).
  // Requires interreduce() first.
  std::vector<SparseVec> kernel_basis() const;

  // pivot_col[i] = leading column of the i-th pivot row (insertion order).
  const std::vector<std::uint32_t>& pivot_cols() const;

  std::size_t memory_bytes() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Dense helpers over F_p (entries stored reduced, row-major).
struct DenseMat {
  std::uint32_t p = 2;
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint32_t> a;

  DenseMat() = default;
  DenseMat(std::uint32_t p_, std::size_t r, std::size_t c)
      : p(p_), rows(r), cols(c), a(r * c, 0) {}
  std::uint32_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

std::size_t rank(const DenseMat& m);

// Basis of the null space {v : m v = 0}, as columns.
std::vector<std::vector<std::uint32_t>> kernel(const DenseMat& m);

// Solves m x = b. Returns false if inconsistent.
bool solve(const DenseMat& m, const std::vector<std::uint32_t>& b,
           std::vector<std::uint32_t>& x);

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);

}  // namespace symcoh::fp
