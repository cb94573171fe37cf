#include "symcoh/fp_linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>

namespace symcoh::fp {

namespace {

constexpr std::uint32_t NPOS = 0xffffffffu;

// Memory cap for pivot storage; exceeding it is a scale error, not an OOM.
constexpr std::size_t kMaxPivotBytes = std::size_t(1800) * 1024 * 1024;

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// --- storage policies --------------------------------------------------

// p = 2: one bit plane.
struct Bit2 {
  using Row = std::vector<std::uint64_t>;
  std::size_t width;
  explicit Bit2(std::uint32_t, std::size_t w) : width(w) {}
  std::size_t words() const { return (width + 63) / 64; }
  Row zero_row() const { return Row(words(), 0); }
  std::size_t row_bytes() const { return words() * 8; }
  static void clear(Row& r) { std::fill(r.begin(), r.end(), 0); }
  static void set(Row& r, std::uint32_t c, std::uint32_t v) {
    if (v & 1)
      r[c >> 6] |= (std::uint64_t(1) << (c & 63));
    else
      r[c >> 6] &= ~(std::uint64_t(1) << (c & 63));
  }
  static std::uint32_t get(const Row& r, std::uint32_t c) {
    return (r[c >> 6] >> (c & 63)) & 1;
  }
  std::uint32_t scan_lead(const Row& r, std::uint32_t from) const {
    if (from >= width) return NPOS;
    std::size_t w = from >> 6;
    std::uint64_t first = r[w] & (~std::uint64_t(0) << (from & 63));
    if (first) return std::uint32_t(w * 64 + __builtin_ctzll(first));
    for (++w; w < r.size(); ++w)
      if (r[w]) return std::uint32_t(w * 64 + __builtin_ctzll(r[w]));
    return NPOS;
  }
  void axpy(Row& dst, std::uint32_t /*c = 1*/, const Row& src, std::uint32_t from) const {
    for (std::size_t w = from >> 6; w < dst.size(); ++w) dst[w] ^= src[w];
  }
  void scale(Row&, std::uint32_t, std::uint32_t) const {}
};

// p = 3: two bit planes, value = lo + 2*hi, lanes never hold 3.
struct Trit3 {
  using Row = std::vector<std::uint64_t>;  // lo plane then hi plane
  std::size_t width;
  explicit Trit3(std::uint32_t, std::size_t w) : width(w) {}
  std::size_t words() const { return (width + 63) / 64; }
  Row zero_row() const { return Row(2 * words(), 0); }
  std::size_t row_bytes() const { return 2 * words() * 8; }
  static void clear(Row& r) { std::fill(r.begin(), r.end(), 0); }
  void set(Row& r, std::uint32_t c, std::uint32_t v) const {
    std::uint64_t m = std::uint64_t(1) << (c & 63);
    std::size_t w = c >> 6, W = words();
    r[w] = (r[w] & ~m) | ((v & 1) ? m : 0);
    r[W + w] = (r[W + w] & ~m) | ((v >> 1) ? m : 0);
  }
  std::uint32_t get(const Row& r, std::uint32_t c) const {
    std::size_t w = c >> 6, W = words();
    std::uint32_t lo = (r[w] >> (c & 63)) & 1;
    std::uint32_t hi = (r[W + w] >> (c & 63)) & 1;
    return lo + 2 * hi;
  }
  std::uint32_t scan_lead(const Row& r, std::uint32_t from) const {
    if (from >= width) return NPOS;
    std::size_t W = words(), w = from >> 6;
    std::uint64_t first = (r[w] | r[W + w]) & (~std::uint64_t(0) << (from & 63));
    if (first) return std::uint32_t(w * 64 + __builtin_ctzll(first));
    for (++w; w < W; ++w) {
      std::uint64_t u = r[w] | r[W + w];
      if (u) return std::uint32_t(w * 64 + __builtin_ctzll(u));
    }
    return NPOS;
  }
  // dst += c*src lane-wise mod 3; c = 2 negates (swap planes).
  void axpy(Row& dst, std::uint32_t c, const Row& src, std::uint32_t from) const {
    std::size_t W = words();
    bool swap = (c == 2);
    for (std::size_t w = from >> 6; w < W; ++w) {
      std::uint64_t al = dst[w], ah = dst[W + w];
      std::uint64_t bl = src[w], bh = src[W + w];
      if (swap) std::swap(bl, bh);
      std::uint64_t sl = ((al ^ bl) & ~(ah | bh)) | (ah & bh);
      std::uint64_t sh = ((ah ^ bh) & ~(al | bl)) | (al & bl);
      dst[w] = sl;
      dst[W + w] = sh;
    }
  }
  void scale(Row& r, std::uint32_t c, std::uint32_t from) const {
    if (c == 2) {
      std::size_t W = words();
      for (std::size_t w = from >> 6; w < W; ++w) std::swap(r[w], r[W + w]);
    }
  }
};

// Generic p: one 32-bit word per entry.
struct Words {
  using Row = std::vector<std::uint32_t>;
  std::uint32_t p;
  std::size_t width;
  Words(std::uint32_t p_, std::size_t w) : p(p_), width(w) {}
  Row zero_row() const { return Row(width, 0); }
  std::size_t row_bytes() const { return width * 4; }
  static void clear(Row& r) { std::fill(r.begin(), r.end(), 0); }
  static void set(Row& r, std::uint32_t c, std::uint32_t v) { r[c] = v; }
  static std::uint32_t get(const Row& r, std::uint32_t c) { return r[c]; }
  std::uint32_t scan_lead(const Row& r, std::uint32_t from) const {
    for (std::size_t c = from; c < width; ++c)
      if (r[c]) return std::uint32_t(c);
    return NPOS;
  }
  void axpy(Row& dst, std::uint32_t c, const Row& src, std::uint32_t from) const {
    for (std::size_t i = from; i < width; ++i)
      dst[i] = std::uint32_t((dst[i] + std::uint64_t(c) * src[i]) % p);
  }
  void scale(Row& r, std::uint32_t c, std::uint32_t from) const {
    for (std::size_t i = from; i < width; ++i)
      r[i] = std::uint32_t(std::uint64_t(c) * r[i] % p);
  }
};

template <class Policy>
class EchelonT {
 public:
  EchelonT(std::uint32_t p, std::size_t main, std::size_t aug)
      : p_(p), main_(main), width_(main + aug), pol_(p, main + aug),
        pivot_of_col_(main, -1), scratch_(pol_.zero_row()) {}

  bool add_row(const SparseVec& row) {
    load_scratch(row);
    std::uint32_t lead = reduce_scratch();
    if (lead >= main_) return false;
    std::uint32_t v = pol_.get(scratch_, lead);
    if (v != 1) pol_.scale(scratch_, std::uint32_t(pow_mod(v, p_ - 2, p_)), lead);
    bytes_ += pol_.row_bytes();
    if (bytes_ > kMaxPivotBytes)
      throw ScaleError("echelon pivot storage exceeds memory cap");
    pivot_of_col_[lead] = std::int32_t(rows_.size());
    rows_.push_back(scratch_);
    leads_.push_back(lead);
    return true;
  }

  SparseVec reduce(const SparseVec& v) const {
    auto* self = const_cast<EchelonT*>(this);
    self->load_scratch(v);
    self->reduce_scratch();
    SparseVec out;
    std::uint32_t c = pol_.scan_lead(scratch_, 0);
    while (c != NPOS) {
      out.push_back({c, pol_.get(scratch_, c)});
      c = pol_.scan_lead(scratch_, c + 1);
    }
    return out;
  }

  void interreduce() {
    // Clear each pivot column from all earlier-leading rows, rightmost first.
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return leads_[a] > leads_[b]; });
    for (std::size_t k = 0; k < order.size(); ++k) {
      std::size_t i = order[k];
      std::uint32_t L = leads_[i];
      for (std::size_t m = k + 1; m < order.size(); ++m) {
        std::size_t j = order[m];
        std::uint32_t v = pol_.get(rows_[j], L);
        if (v) pol_.axpy(rows_[j], p_ - v, rows_[i], L);
      }
    }
  }

  std::vector<SparseVec> kernel_basis() const {
    std::vector<SparseVec> out;
    for (std::uint32_t j = 0; j < main_; ++j) {
      if (pivot_of_col_[j] >= 0) continue;
      SparseVec v;
      v.push_back({j, 1});
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        std::uint32_t val = pol_.get(rows_[i], j);
        if (val) v.push_back({leads_[i], p_ - val});
      }
      std::sort(v.begin(), v.end(),
                [](const Entry& a, const Entry& b) { return a.col < b.col; });
      out.push_back(std::move(v));
    }
    return out;
  }

  std::size_t rank() const { return rows_.size(); }
  const std::vector<std::uint32_t>& pivot_cols() const { return leads_; }
  std::size_t memory_bytes() const { return bytes_; }

 private:
  void load_scratch(const SparseVec& row) {
    Policy::clear(scratch_);
    for (const auto& e : row) {
      assert(e.col < width_ && e.val > 0 && e.val < p_);
      pol_.set(scratch_, e.col, e.val);
    }
  }

  // Eliminates against pivots; returns the leading main column of the
  // residual, or a value >= main_ when none.
  std::uint32_t reduce_scratch() {
    std::uint32_t lead = pol_.scan_lead(scratch_, 0);
    while (lead != NPOS && lead < main_ && pivot_of_col_[lead] >= 0) {
      const auto& prow = rows_[std::size_t(pivot_of_col_[lead])];
      std::uint32_t v = pol_.get(scratch_, lead);
      pol_.axpy(scratch_, p_ - v, prow, lead);
      lead = pol_.scan_lead(scratch_, lead + 1);
    }
    return lead == NPOS ? std::uint32_t(width_) : lead;
  }

  std::uint32_t p_;
  std::size_t main_, width_;
  Policy pol_;
  std::vector<typename Policy::Row> rows_;
  std::vector<std::uint32_t> leads_;
  std::vector<std::int32_t> pivot_of_col_;
  typename Policy::Row scratch_;
  std::size_t bytes_ = 0;
};

}  // namespace

struct Echelon::Impl {
  std::uint32_t p;
  std::size_t main, aug;
  // exactly one of these is active
  std::unique_ptr<EchelonT<Bit2>> e2;
  std::unique_ptr<EchelonT<Trit3>> e3;
  std::unique_ptr<EchelonT<Words>> ew;
};

Echelon::Echelon(std::uint32_t p, std::size_t cols, std::size_t aug)
    : impl_(std::make_unique<Impl>()) {
  impl_->p = p;
  impl_->main = cols;
  impl_->aug = aug;
  if (p == 2)
    impl_->e2 = std::make_unique<EchelonT<Bit2>>(p, cols, aug);
  else if (p == 3)
    impl_->e3 = std::make_unique<EchelonT<Trit3>>(p, cols, aug);
  else
    impl_->ew = std::make_unique<EchelonT<Words>>(p, cols, aug);
}

Echelon::~Echelon() = default;
Echelon::Echelon(Echelon&&) noexcept = default;
Echelon& Echelon::operator=(Echelon&&) noexcept = default;

std::uint32_t Echelon::p() const { return impl_->p; }
std::size_t Echelon::cols() const { return impl_->main; }
std::size_t Echelon::aug() const { return impl_->aug; }

#define SYMCOH_DISPATCH(expr)                  \
  do {                                         \
    if (impl_->e2) return impl_->e2->expr;     \
    if (impl_->e3) return impl_->e3->expr;     \
    return impl_->ew->expr;                    \
  } while (0)

bool Echelon::add_row(const SparseVec& row) { SYMCOH_DISPATCH(add_row(row)); }
std::size_t Echelon::rank() const { SYMCOH_DISPATCH(rank()); }
SparseVec Echelon::reduce(const SparseVec& v) const { SYMCOH_DISPATCH(reduce(v)); }
const std::vector<std::uint32_t>& Echelon::pivot_cols() const {
  SYMCOH_DISPATCH(pivot_cols());
}
std::size_t Echelon::memory_bytes() const { SYMCOH_DISPATCH(memory_bytes()); }

void Echelon::interreduce() {
  if (impl_->e2)
    impl_->e2->interreduce();
  else if (impl_->e3)
    impl_->e3->interreduce();
  else
    impl_->ew->interreduce();
}

std::vector<SparseVec> Echelon::kernel_basis() const {
  SYMCOH_DISPATCH(kernel_basis());
}

#undef SYMCOH_DISPATCH

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  return std::uint32_t(pow_mod(a, p - 2, p));
}

std::size_t rank(const DenseMat& m) {
  Echelon e(m.p, m.cols);
  SparseVec row;
  for (std::size_t r = 0; r < m.rows; ++r) {
    row.clear();
    for (std::size_t c = 0; c < m.cols; ++c)
      if (m.at(r, c)) row.push_back({std::uint32_t(c), m.at(r, c)});
    e.add_row(row);
  }
  return e.rank();
}

std::vector<std::vector<std::uint32_t>> kernel(const DenseMat& m) {
  Echelon e(m.p, m.cols);
  SparseVec row;
  for (std::size_t r = 0; r < m.rows; ++r) {
    row.clear();
    for (std::size_t c = 0; c < m.cols; ++c)
      if (m.at(r, c)) row.push_back({std::uint32_t(c), m.at(r, c)});
    e.add_row(row);
  }
  e.interreduce();
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& kv : e.kernel_basis()) {
    std::vector<std::uint32_t> dense(m.cols, 0);
    for (const auto& en : kv) dense[en.col] = en.val;
    out.push_back(std::move(dense));
  }
  return out;
}

bool solve(const DenseMat& m, const std::vector<std::uint32_t>& b,
           std::vector<std::uint32_t>& x) {
  // Feed the columns of m as rows with identity tags; the tag part of the
  // reduced b recovers the coefficients.
  Echelon e(m.p, m.rows, m.cols);
  SparseVec row;
  for (std::size_t c = 0; c < m.cols; ++c) {
    row.clear();
    for (std::size_t r = 0; r < m.rows; ++r)
      if (m.at(r, c)) row.push_back({std::uint32_t(r), m.at(r, c)});
    row.push_back({std::uint32_t(m.rows + c), 1});
    e.add_row(row);
  }
  row.clear();
  for (std::size_t r = 0; r < m.rows; ++r)
    if (b[r]) row.push_back({std::uint32_t(r), b[r]});
  SparseVec res = e.reduce(row);
  x.assign(m.cols, 0);
  for (const auto& en : res) {
    if (en.col < m.rows) return false;  // inconsistent
    x[en.col - m.rows] = m.p - en.val;  // residual tags carry -coeffs
  }
  return true;
}

}  // namespace symcoh::fp
