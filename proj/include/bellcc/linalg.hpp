#pragma once

// Dense complex linear algebra for small n-qubit systems.
//
// Ordering: party 1 is the most significant qubit of a basis index. For an
// n-qubit system party p (0-based) owns bit (n - 1 - p).

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bellcc/core.hpp"

namespace bellcc {

using Complex = std::complex<double>;

inline constexpr unsigned kMaxQubits = 12;
inline constexpr double kBlochRenormalizeWindow = 1e-2;

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

namespace pauli {
inline constexpr Matrix2 identity{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}};
inline constexpr Matrix2 x{Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}};
inline constexpr Matrix2 y{Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0}};
inline constexpr Matrix2 z{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{-1, 0}};
inline constexpr std::array<Matrix2, 3> xyz{x, y, z};
}  // namespace pauli

inline bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

/// Square dense complex matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix from_2x2(const Matrix2& a) {
    Matrix m(2);
    std::copy(a.begin(), a.end(), m.data_.begin());
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  std::span<const Complex> data() const noexcept { return data_; }

  Complex trace() const {
    Complex t{};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  bool is_hermitian(double tol = kTolerance) const {
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = r; c < dim_; ++c)
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  Matrix& operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    Matrix out(a.dim_);
    for (std::size_t r = 0; r < a.dim_; ++r)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Complex ark = a(r, k);
        if (ark == Complex{}) continue;
        for (std::size_t c = 0; c < a.dim_; ++c) out(r, c) += ark * b(k, c);
      }
    return out;
  }

  std::vector<Complex> apply(std::span<const Complex> v) const {
    if (v.size() != dim_) throw ValidationError("matrix-vector dimension mismatch");
    std::vector<Complex> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      Complex acc{};
      for (std::size_t c = 0; c < dim_; ++c) acc += (*this)(r, c) * v[c];
      out[r] = acc;
    }
    return out;
  }

  double max_abs_diff(const Matrix& o) const {
    check_same(o);
    double m = 0;
    for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - o.data_[i]));
    return m;
  }

 private:
  void check_same(const Matrix& o) const {
    if (o.dim_ != dim_) throw ValidationError("matrix dimension mismatch");
  }

  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// An operator on n qubits; dimension is always 2^n.
using OperatorN = Matrix;

inline unsigned qubits_for_dim(std::size_t dim) {
  unsigned n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim || n == 0) throw ValidationError("dimension " + std::to_string(dim) + " is not a power of two");
  return n;
}

inline double squared_norm(std::span<const Complex> v) {
  double s = 0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Applies a 2x2 operator to qubit `party` of an n-qubit vector in place.
inline void apply_local(std::span<Complex> v, unsigned n, unsigned party, const Matrix2& op) {
  const std::size_t stride = std::size_t{1} << (n - 1 - party);
  for (std::size_t base = 0; base < v.size(); base += 2 * stride)
    for (std::size_t off = 0; off < stride; ++off) {
      const std::size_t i0 = base + off, i1 = i0 + stride;
      const Complex a0 = v[i0], a1 = v[i1];
      v[i0] = op[0] * a0 + op[1] * a1;
      v[i1] = op[2] * a0 + op[3] * a1;
    }
}

class PureState {
 public:
  /// Validates that the squared norm is 1 within kTolerance.
  explicit PureState(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    n_ = qubits_for_dim(amps_.size());
    if (n_ > kMaxQubits) throw ValidationError("state exceeds " + std::to_string(kMaxQubits) + " qubits");
    for (const auto& a : amps_)
      if (!is_finite(a)) throw ValidationError("state amplitude is not finite");
    if (std::abs(squared_norm(amps_) - 1.0) > kTolerance) throw ValidationError("state is not normalized");
  }

  /// Rescales to unit norm first; rejects the zero vector.
  static PureState normalized(std::vector<Complex> amplitudes) {
    const double nrm = std::sqrt(squared_norm(amplitudes));
    if (!(nrm > 0) || !std::isfinite(nrm)) throw ValidationError("cannot normalize a zero or non-finite state");
    for (auto& a : amplitudes) a /= nrm;
    return PureState(std::move(amplitudes));
  }

  unsigned qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }

  Matrix density() const {
    Matrix rho(dim());
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t c = 0; c < dim(); ++c) rho(r, c) = amps_[r] * std::conj(amps_[c]);
    return rho;
  }

 private:
  std::vector<Complex> amps_;
  unsigned n_ = 0;
};

namespace detail {
// Cholesky of a Hermitian matrix; returns false when a pivot is not positive.
inline bool cholesky_succeeds(const Matrix& a) {
  const std::size_t d = a.dim();
  std::vector<Complex> l(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l[j * d + k]);
    if (!(diag > 0)) return false;
    const double ljj = std::sqrt(diag);
    l[j * d + j] = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * d + k] * std::conj(l[j * d + k]);
      l[i * d + j] = s / ljj;
    }
  }
  return true;
}
}  // namespace detail

class MixedState {
 public:
  /// Validates Hermiticity, unit trace and positive semidefiniteness
  /// (smallest eigenvalue >= -kTolerance, checked by a shifted Cholesky).
  explicit MixedState(Matrix rho) : rho_(std::move(rho)) {
    n_ = qubits_for_dim(rho_.dim());
    if (n_ > kMaxQubits) throw ValidationError("state exceeds " + std::to_string(kMaxQubits) + " qubits");
    for (const auto& v : rho_.data())
      if (!is_finite(v)) throw ValidationError("density matrix entry is not finite");
    if (!rho_.is_hermitian()) throw ValidationError("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - Complex{1.0}) > kTolerance) throw ValidationError("density matrix trace is not 1");
    Matrix shifted = rho_ + kTolerance * Matrix::identity(rho_.dim());
    if (!detail::cholesky_succeeds(shifted)) throw ValidationError("density matrix is not positive semidefinite");
  }

  unsigned qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return rho_.dim(); }
  const Matrix& matrix() const noexcept { return rho_; }

 private:
  Matrix rho_;
  unsigned n_ = 0;
};

using State = std::variant<PureState, MixedState>;

inline unsigned qubits(const State& s) {
  return std::visit([](const auto& st) { return st.qubits(); }, s);
}

/// Binary qubit observable r . sigma with unit Bloch vector r.
class Observable2 {
 public:
  explicit Observable2(std::array<double, 3> bloch) : bloch_(bloch) {
    const double nrm = std::hypot(bloch_[0], bloch_[1], bloch_[2]);
    if (std::abs(nrm - 1.0) > kTolerance) throw InvalidBlochVector("Bloch vector is not unit length");
  }

  const std::array<double, 3>& bloch() const noexcept { return bloch_; }

  Matrix2 matrix() const {
    const auto [rx, ry, rz] = bloch_;
    return {Complex{rz, 0}, Complex{rx, -ry}, Complex{rx, ry}, Complex{-rz, 0}};
  }

  /// Outcome projector (I + a A) / 2 for a in {+1, -1}.
  Matrix2 projector(int a) const {
    const Matrix2 m = matrix();
    Matrix2 p;
    for (std::size_t i = 0; i < 4; ++i) p[i] = (pauli::identity[i] + double(a) * m[i]) * 0.5;
    return p;
  }

  friend bool operator==(const Observable2&, const Observable2&) = default;

 private:
  std::array<double, 3> bloch_;
};

/// Bloch vectors within 1e-2 of unit norm are renormalized (published settings
/// are printed to two decimals); anything further
/// off is rejected with InvalidBlochVector.
inline Observable2 bloch_to_observable(std::array<double, 3> r) {
  for (double c : r)
    if (!std::isfinite(c)) throw InvalidBlochVector("Bloch vector has a non-finite component");
  const double nrm = std::hypot(r[0], r[1], r[2]);
  if (std::abs(nrm - 1.0) > kBlochRenormalizeWindow)
    throw InvalidBlochVector("Bloch vector norm " + std::to_string(nrm) + " is not within 1e-2 of 1");
  for (double& c : r) c /= nrm;
  return Observable2(r);
}

/// Kronecker product in party order; the first factor is the most significant.
inline OperatorN tensor_product(std::span<const Matrix2> factors) {
  if (factors.empty()) throw ValidationError("tensor product of an empty factor list");
  if (factors.size() > kMaxQubits) throw ValidationError("tensor product exceeds the qubit limit");
  Matrix out = Matrix::from_2x2(factors[0]);
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const std::size_t d = out.dim();
    Matrix next(2 * d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        const Complex v = out(r, c);
        if (v == Complex{}) continue;
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < 2; ++j) next(2 * r + i, 2 * c + j) = v * factors[f][2 * i + j];
      }
    out = std::move(next);
  }
  return out;
}

inline PureState ghz_state(unsigned n) {
  if (n < 2 || n > kMaxQubits) throw ValidationError("GHZ state requires 2 <= n <= " + std::to_string(kMaxQubits));
  std::vector<Complex> amps(std::size_t{1} << n);
  amps.front() = amps.back() = 1.0 / std::sqrt(2.0);
  return PureState(std::move(amps));
}

/// v |psi><psi| + (1 - v) I / 2^n.
inline MixedState depolarize(const PureState& psi, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("visibility must lie in [0, 1]");
  Matrix rho = psi.density();
  rho *= v;
  const double noise = (1.0 - v) / double(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) rho(i, i) += noise;
  return MixedState(std::move(rho));
}

namespace detail {
inline double real_part_checked(Complex v) {
  if (std::abs(v.imag()) > 1e-6)
    throw NumericError("expectation has imaginary residue " + std::to_string(v.imag()));
  return v.real();
}
}  // namespace detail

/// Tr[rho op] or <psi|op|psi>.
inline double expectation(const State& state, const OperatorN& op) {
  return std::visit(
      [&](const auto& s) -> double {
        if (s.dim() != op.dim()) throw ValidationError("state and operator dimensions differ");
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PureState>) {
          const auto phi = op.apply(s.amplitudes());
          return detail::real_part_checked(inner(s.amplitudes(), phi));
        } else {
          Complex t{};
          const Matrix& rho = s.matrix();
          for (std::size_t r = 0; r < rho.dim(); ++r)
            for (std::size_t c = 0; c < rho.dim(); ++c) t += rho(r, c) * op(c, r);
          return detail::real_part_checked(t);
        }
      },
      state);
}

/// Expectation of a product operator op_1 (x) ... (x) op_n without forming it.
inline double expectation_product(const State& state, std::span<const Matrix2> factors) {
  return std::visit(
      [&](const auto& s) -> double {
        const unsigned n = s.qubits();
        if (factors.size() != n) throw ValidationError("factor count does not match qubit count");
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PureState>) {
          std::vector<Complex> phi(s.amplitudes().begin(), s.amplitudes().end());
          for (unsigned p = 0; p < n; ++p) apply_local(phi, n, p, factors[p]);
          return detail::real_part_checked(inner(s.amplitudes(), phi));
        } else {
          // Tr[rho O] = sum_{r,c} rho(r,c) O(c,r), with O(c,r) a product of 2x2 entries.
          const Matrix& rho = s.matrix();
          const std::size_t d = rho.dim();
          Complex t{};
          for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) {
              const Complex rv = rho(r, c);
              if (rv == Complex{}) continue;
              Complex o{1.0};
              for (unsigned p = 0; p < n && o != Complex{}; ++p) {
                const unsigned shift = n - 1 - p;
                o *= factors[p][2 * ((c >> shift) & 1u) + ((r >> shift) & 1u)];
              }
              t += rv * o;
            }
          return detail::real_part_checked(t);
        }
      },
      state);
}

}  // namespace bellcc
