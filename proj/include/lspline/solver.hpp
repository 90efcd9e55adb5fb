#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "lspline/functionals.hpp"

namespace lspline {

/// Penalised weighted least-squares problem: minimise
/// sum_j d_j [Y_j - F_j(mu)]^2 + lambda * penalty(mu).
struct FitProblem {
    Functionals functionals;
    Eigen::VectorXd obs;
    Eigen::VectorXd weights;  // d_j > 0; empty means all ones
    double lambda = 1.0;
    std::shared_ptr<const NullSpaceBasis> basis;
    std::shared_ptr<const KernelPair> kernel;

    int size() const { return static_cast<int>(functionals.size()); }
    Eigen::VectorXd effective_weights() const;
    std::vector<double> point_locations() const;
    void validate() const;
};

/// Point-evaluation fit problem on explicit design points.
FitProblem make_point_problem(const PenaltyModel& model, std::vector<double> design,
                              Eigen::VectorXd obs, double lambda,
                              Eigen::VectorXd weights = {});

struct FitDiagnostics {
    double penalty = 0.0;    // beta' K beta
    double rss = 0.0;        // sum d_j (Y_j - Yhat_j)^2
    double edf = std::numeric_limits<double>::quiet_NaN();  // trace of the hat matrix
    double objective = 0.0;  // rss + lambda * penalty
};

struct FitResult {
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;
    Eigen::VectorXd fitted;
    std::function<double(double)> evaluator;  // mu_hat(t)
    FitDiagnostics diagnostics;
    bool separation_warning = false;          // logistic path
    std::vector<double> objective_trace;      // logistic path, accepted iterates
};

/// Dense path: alpha = (T'M^{-1}T)^{-1} T'M^{-1}Y,
/// beta = M^{-1}[I - T(T'M^{-1}T)^{-1}T'M^{-1}]Y with M = K + lambda D^{-1},
/// all through factorisations. with_edf additionally computes the hat-matrix
/// trace (O(n^3) work).
FitResult solve_dense(const FitProblem& p, const KMatrix& k,
                      const Eigen::MatrixXd& t_matrix, bool with_edf = true);

/// n x (n-m) matrix with Q(i,j) = 0 unless j <= i <= j+m, stored by columns
/// of length m+1.
class BandedQ {
public:
    BandedQ(int n, int band);

    int rows() const { return n_; }
    int cols() const { return n_ - band_; }
    int band() const { return band_; }

    double& entry(int offset, int col) { return data_(offset, col); }
    double entry(int offset, int col) const { return data_(offset, col); }

    /// Dense-index accessor; zero outside the band.
    double coeff(int i, int j) const;

    Eigen::VectorXd column(int col) const { return data_.col(col); }
    Eigen::VectorXd apply(const Eigen::VectorXd& g) const;            // Q g
    Eigen::VectorXd transpose_apply(const Eigen::VectorXd& y) const;  // Q' y
    Eigen::MatrixXd dense() const;

    void scale_column(int col, double c) { data_.col(col) *= c; }

private:
    int n_, band_;
    Eigen::MatrixXd data_;  // (band+1) x (n-band)
};

/// For each i, q_i is the last column of the orthonormal factor of the QR
/// decomposition of rows i..i+m of T; assembled Q satisfies Q'T = 0 with
/// unit-norm columns. Throws DegenerateBlock on rank-deficient blocks.
BandedQ build_banded_q(const Eigen::MatrixXd& t_matrix);

/// Symmetric banded matrix stored by lower diagonals: band(d, j) = A(j+d, j).
class SymmetricBandMatrix {
public:
    SymmetricBandMatrix(int n, int bandwidth);

    int size() const { return n_; }
    int bandwidth() const { return bw_; }

    double at(int i, int j) const;
    void set(int i, int j, double v);
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd dense() const;

private:
    int n_, bw_;
    Eigen::MatrixXd diags_;  // (bw+1) x n
};

/// Banded Cholesky A = L L' preserving bandwidth; throws CholeskyFailure when
/// A is not numerically positive definite.
class BandedCholesky {
public:
    explicit BandedCholesky(const SymmetricBandMatrix& a);
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
    int n_, bw_;
    Eigen::MatrixXd l_;
};

/// Fast path for point evaluation on strictly increasing interior points:
/// beta = Q (Q'MQ)^{-1} Q'Y via banded Cholesky (bandwidth m),
/// alpha = (T'T)^{-1} T'(Y - M beta), Yhat = Y - lambda D^{-1} beta.
/// O(n m^2) after the kernel-band prefix pass.
FitResult solve_banded(const FitProblem& p, const Eigen::MatrixXd& t_matrix,
                       const BandedQ& q);

/// Penalised logistic fit for labels Y in {-1, +1}: minimises
/// sum_j log(1 + exp(-Y_j mu(t_j))) + lambda beta'K beta by damped Newton.
/// Throws NonConvergence after 100 iterations; flags quasi-separation.
FitResult solve_logistic(const FitProblem& p, const KMatrix& k,
                         const Eigen::MatrixXd& t_matrix);

struct LambdaScore {
    double lambda = 0.0;
    double gcv = 0.0;
    double edf = 0.0;
    double rss = 0.0;
};

struct LambdaSelection {
    double best = 0.0;
    std::vector<LambdaScore> table;
};

/// GCV(lambda) = n ||Y - Yhat||^2_D / (n - tr A(lambda))^2 over the grid,
/// dense path; returns the grid minimiser and the full table.
LambdaSelection select_lambda(const FitProblem& p, const std::vector<double>& grid);

enum class SolvePath { Auto, Dense, Banded };

/// True when the banded preconditions hold: all point evaluations, strictly
/// increasing design strictly inside (a, b), lambda > 0 and n > m.
bool banded_eligible(const FitProblem& p);

/// Front door: assembles the needed matrices and dispatches. Auto picks the
/// banded path whenever it is eligible.
FitResult solve(const FitProblem& p, SolvePath path = SolvePath::Auto);

}  // namespace lspline
