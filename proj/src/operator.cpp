#include "fcp/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fcp/error.hpp"

namespace fcp {

double sup_norm(const CVec& v) {
    double s = 0.0;
    for (const auto& x : v) s = std::max(s, std::abs(x));
    return s;
}

double sup_norm(const RVec& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

void SectorialOperator::check_dim(const CVec& v) const {
    if (v.size() != dim()) {
        throw UsageError("dimension mismatch: operator has dim " + std::to_string(dim()) +
                         ", vector has " + std::to_string(v.size()));
    }
}

namespace {

constexpr double kSingularShift = 1e-14;

std::string fmt_cplx(cplx w) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.6g%+.6gi)", w.real(), w.imag());
    return buf;
}

}  // namespace

// ---- scalar ----

ScalarOperator::ScalarOperator(double lambda, double phi_s) : lambda_(lambda), phi_s_(phi_s) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("lambda must be positive");
}

CVec ScalarOperator::resolvent_solve(cplx w, const CVec& v) const {
    check_dim(v);
    const cplx s = w + lambda_;
    if (std::abs(s) < kSingularShift)
        throw NumericalError("singular shift " + fmt_cplx(w) + " for scalar operator");
    return {v[0] / s};
}

CVec ScalarOperator::apply(const CVec& v) const {
    check_dim(v);
    return {lambda_ * v[0]};
}

std::string ScalarOperator::describe() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "scalar(lambda=%.17g)", lambda_);
    return buf;
}

// ---- diagonal ----

DiagonalOperator::DiagonalOperator(RVec eigenvalues, double phi_s)
    : eig_(std::move(eigenvalues)), phi_s_(phi_s) {
    if (eig_.empty()) throw UsageError("diagonal operator needs at least one eigenvalue");
    for (double l : eig_)
        if (!(l > 0.0) || !std::isfinite(l)) throw UsageError("eigenvalues must be positive");
}

SpectralParams DiagonalOperator::spectral() const {
    return {*std::min_element(eig_.begin(), eig_.end()), phi_s_};
}

CVec DiagonalOperator::resolvent_solve(cplx w, const CVec& v) const {
    check_dim(v);
    CVec x(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const cplx s = w + eig_[k];
        if (std::abs(s) < kSingularShift)
            throw NumericalError("singular shift " + fmt_cplx(w) + " at eigenvalue index " +
                                 std::to_string(k));
        x[k] = v[k] / s;
    }
    return x;
}

CVec DiagonalOperator::apply(const CVec& v) const {
    check_dim(v);
    CVec x(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) x[k] = eig_[k] * v[k];
    return x;
}

std::string DiagonalOperator::describe() const {
    return "diagonal(n=" + std::to_string(eig_.size()) + ")";
}

// ---- finite differences ----

FdLaplacian1D::FdLaplacian1D(std::size_t m, double a, double L, double phi_s)
    : m_(m), a_(a), L_(L), phi_s_(phi_s) {
    if (m < 3) throw UsageError("fd_laplacian_1d needs m >= 3");
    if (!(a > 0.0)) throw UsageError("diffusivity a must be positive");
    if (!(L > 0.0)) throw UsageError("domain length L must be positive");
    const double dm = static_cast<double>(m - 1);
    scale_ = a * dm * dm / (L * L);
}

RVec FdLaplacian1D::grid() const {
    RVec x(m_);
    for (std::size_t i = 0; i < m_; ++i)
        x[i] = L_ * static_cast<double>(i) / static_cast<double>(m_ - 1);
    x.back() = L_;
    return x;
}

// Eigenvalues 4 s sin^2(pi k / (2(m-1))), k = 1..m-2.
double FdLaplacian1D::eigenvalue(std::size_t k) const {
    const double s = std::sin(kPi * static_cast<double>(k) / (2.0 * static_cast<double>(m_ - 1)));
    return 4.0 * scale_ * s * s;
}

SpectralParams FdLaplacian1D::spectral() const { return {eigenvalue(1), phi_s_}; }

CVec FdLaplacian1D::interior(const CVec& full) const {
    if (full.size() != m_) throw UsageError("grid vector must have m entries");
    return CVec(full.begin() + 1, full.end() - 1);
}

CVec FdLaplacian1D::with_boundary(const CVec& inner) const {
    check_dim(inner);
    CVec full(m_, cplx(0.0));
    std::copy(inner.begin(), inner.end(), full.begin() + 1);
    return full;
}

CVec FdLaplacian1D::resolvent_solve(cplx w, const CVec& v) const {
    check_dim(v);
    CVec diag(dim(), w + 2.0 * scale_);
    return tridiag_solve(diag, cplx(-scale_), v);
}

CVec FdLaplacian1D::apply(const CVec& v) const {
    check_dim(v);
    const std::size_t n = v.size();
    CVec x(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 2.0 * v[i];
        if (i > 0) s -= v[i - 1];
        if (i + 1 < n) s -= v[i + 1];
        x[i] = scale_ * s;
    }
    return x;
}

std::string FdLaplacian1D::describe() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "fd_laplacian_1d(m=%zu,a=%.17g,L=%.17g)", m_, a_, L_);
    return buf;
}

CVec tridiag_solve(const CVec& diag, cplx off, const CVec& rhs) {
    const std::size_t n = diag.size();
    if (rhs.size() != n) throw UsageError("tridiag_solve: size mismatch");
    if (n == 0) return {};
    double scale = std::abs(off);
    for (const auto& d : diag) scale = std::max(scale, std::abs(d));
    const double tiny = 1e-300 + 1e-15 * scale;

    CVec c(n), x(n);
    cplx piv = diag[0];
    if (std::abs(piv) <= tiny) throw NumericalError("tridiag_solve: zero pivot at row 0");
    c[0] = off / piv;
    x[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - off * c[i - 1];
        if (std::abs(piv) <= tiny)
            throw NumericalError("tridiag_solve: zero pivot at row " + std::to_string(i));
        c[i] = off / piv;
        x[i] = (rhs[i] - off * x[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

}  // namespace fcp
