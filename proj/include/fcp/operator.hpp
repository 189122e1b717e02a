#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "fcp/contour.hpp"
#include "fcp/types.hpp"

namespace fcp {

// Strongly positive operator A, accessed only through (wI + A)^{-1} and A itself.
// Implementations are immutable and reentrant.
class SectorialOperator {
public:
    virtual ~SectorialOperator() = default;

    virtual std::size_t dim() const = 0;
    virtual SpectralParams spectral() const = 0;
    // R(conj w) v = conj(R(w) conj v): enables the half-contour sums.
    virtual bool conjugate_symmetric() const { return true; }

    // Returns (wI + A)^{-1} v. Callers pass w = z^alpha.
    virtual CVec resolvent_solve(cplx w, const CVec& v) const = 0;
    virtual CVec apply(const CVec& v) const = 0;
    virtual std::string describe() const = 0;

protected:
    void check_dim(const CVec& v) const;
};

using OperatorPtr = std::shared_ptr<const SectorialOperator>;

class ScalarOperator final : public SectorialOperator {
public:
    explicit ScalarOperator(double lambda, double phi_s = kPi / 60.0);
    double lambda() const { return lambda_; }

    std::size_t dim() const override { return 1; }
    SpectralParams spectral() const override { return {lambda_, phi_s_}; }
    CVec resolvent_solve(cplx w, const CVec& v) const override;
    CVec apply(const CVec& v) const override;
    std::string describe() const override;

private:
    double lambda_;
    double phi_s_;
};

class DiagonalOperator final : public SectorialOperator {
public:
    explicit DiagonalOperator(RVec eigenvalues, double phi_s = kPi / 60.0);
    const RVec& eigenvalues() const { return eig_; }

    std::size_t dim() const override { return eig_.size(); }
    SpectralParams spectral() const override;
    CVec resolvent_solve(cplx w, const CVec& v) const override;
    CVec apply(const CVec& v) const override;
    std::string describe() const override;

private:
    RVec eig_;
    double phi_s_;
};

// -a u'' on [0, L] with homogeneous Dirichlet data, second-order differences on
// the uniform grid x_i = (i-1)L/(m-1), i = 1..m. Unknowns are the m-2 interior values.
class FdLaplacian1D final : public SectorialOperator {
public:
    FdLaplacian1D(std::size_t m, double a = 1.0, double L = 1.0, double phi_s = kPi / 60.0);

    std::size_t m() const { return m_; }
    double a() const { return a_; }
    double L() const { return L_; }
    double scale() const { return scale_; }
    // All m grid nodes, boundaries included.
    RVec grid() const;
    double eigenvalue(std::size_t k) const;

    CVec interior(const CVec& full) const;
    CVec with_boundary(const CVec& inner) const;

    std::size_t dim() const override { return m_ - 2; }
    SpectralParams spectral() const override;
    CVec resolvent_solve(cplx w, const CVec& v) const override;
    CVec apply(const CVec& v) const override;
    std::string describe() const override;

private:
    std::size_t m_;
    double a_;
    double L_;
    double phi_s_;
    double scale_;  // a (m-1)^2 / L^2
};

// Thomas elimination for tridiag(off, diag_i, off) x = rhs.
CVec tridiag_solve(const CVec& diag, cplx off, const CVec& rhs);

}  // namespace fcp
