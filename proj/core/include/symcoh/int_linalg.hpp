#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symcoh/ring.hpp"

namespace symcoh::zlin {

// Dense integer matrix, row-major.
struct ZMat {
  std::size_t rows = 0, cols = 0;
  std::vector<Int> a;

  ZMat() = default;
  ZMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  Int& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Int& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

// Finitely generated abelian group: Z^free_rank + sum of Z/d_i with
// d_1 | d_2 | ... , every d_i >= 2.
struct AbelianGroupStructure {
  std::size_t free_rank = 0;
  std::vector<Int> invariant_factors;

  bool operator==(const AbelianGroupStructure&) const = default;
  bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
  std::string to_string() const;  // e.g. "Z^2+Z/2+Z/6", "Z/8", "0"
};

struct SmithResult {
  std::vector<Int> factors;  // nonzero invariant factors d_1 | d_2 | ..., incl. 1s
  std::size_t rank = 0;      // = factors.size()
};

// Smith normal form by gcd-driven row/column reduction, pivoting on magnitude.
SmithResult smith(ZMat m);

// Smith form with the row transform tracked: returns factors plus U and
// U^{-1} with U * m * V = diag. Only the row-side transforms are exposed;
// they are what quotient generators need.
struct SmithTransformResult {
  std::vector<Int> factors;
  std::size_t rank = 0;
  ZMat u;      // rows x rows
  ZMat u_inv;  // rows x rows
};
SmithTransformResult smith_with_row_transform(ZMat m);

// Structure of Z^ambient_rank / (column span of gens).
AbelianGroupStructure cokernel_structure(std::size_t ambient_rank, const ZMat& gens);

// Streaming integer kernel: rows of a matrix with `cols` columns are fed one
// at a time; afterwards kernel() returns a basis of the integral null space
// lattice. Memory stays O(cols^2) regardless of the number of rows.
class KernelStream {
 public:
  explicit KernelStream(std::size_t cols);
  void add_row(const std::vector<std::pair<std::uint32_t, Int>>& row);
  std::size_t rank() const { return pinned_; }
  // kernel basis as columns (each of length cols)
  std::vector<std::vector<Int>> kernel() const;

 private:
  std::size_t cols_, pinned_ = 0;
  ZMat u_;                       // unimodular, kernel candidates live in columns
  std::vector<std::uint32_t> free_;  // still-free column indices of u_
};

// Solves basis * y = b where the columns of `basis` are independent.
// Returns false when b is not in the lattice they span.
bool solve_in_lattice(const ZMat& basis, const std::vector<Int>& b,
                      std::vector<Int>& y);

}  // namespace symcoh::zlin
