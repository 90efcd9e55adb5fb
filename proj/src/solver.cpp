#include "lspline/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lspline {

// ---------------------------------------------------------------------------
// FitProblem

Eigen::VectorXd FitProblem::effective_weights() const {
    if (weights.size() == 0) return Eigen::VectorXd::Ones(size());
    return weights;
}

std::vector<double> FitProblem::point_locations() const {
    std::vector<double> pts;
    pts.reserve(functionals.size());
    for (const auto& f : functionals) pts.push_back(f.location());
    return pts;
}

void FitProblem::validate() const {
    const int n = size();
    if (n < 1) throw std::invalid_argument("empty problem");
    if (!basis || !kernel) throw std::invalid_argument("problem needs a basis and a kernel");
    if (obs.size() != n) throw std::invalid_argument("observation count does not match functionals");
    if (weights.size() != 0 && weights.size() != n)
        throw std::invalid_argument("weight count does not match functionals");
    for (int j = 0; j < weights.size(); ++j)
        if (!(weights(j) > 0.0) || !std::isfinite(weights(j)))
            throw std::invalid_argument("weights must be positive and finite");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be finite and >= 0");
    if (n < basis->size())
        throw std::invalid_argument("need at least as many observations as basis functions");
}

FitProblem make_point_problem(const PenaltyModel& model, std::vector<double> design,
                              Eigen::VectorXd obs, double lambda, Eigen::VectorXd weights) {
    FitProblem p;
    const Interval domain = model.basis->domain();
    for (double t : design)
        if (!domain.contains(t))
            throw std::invalid_argument("design point outside the model interval");
    p.functionals = point_functionals(design);
    p.obs = std::move(obs);
    p.weights = std::move(weights);
    p.lambda = lambda;
    p.basis = model.basis;
    p.kernel = model.kernel;
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// Shared pieces

namespace {

std::function<double(double)> make_evaluator(const FitProblem& p, Eigen::VectorXd alpha,
                                             Eigen::VectorXd beta) {
    auto basis = p.basis;
    auto kernel = p.kernel;
    std::vector<std::function<double(double)>> etas;
    etas.reserve(p.functionals.size());
    for (const auto& f : p.functionals) etas.push_back(representer(f, kernel));
    return [basis, kernel, etas = std::move(etas), alpha = std::move(alpha),
            beta = std::move(beta)](double t) {
        double v = 0.0;
        for (int j = 0; j < alpha.size(); ++j) v += alpha(j) * basis->function(j)(t);
        for (int j = 0; j < beta.size(); ++j)
            if (beta(j) != 0.0) v += beta(j) * etas[j](t);
        return v;
    };
}

void fill_quadratic_diagnostics(const FitProblem& p, const Eigen::VectorXd& k_beta,
                                FitResult& r) {
    const Eigen::VectorXd d = p.effective_weights();
    r.diagnostics.penalty = r.beta.dot(k_beta);
    r.diagnostics.rss = ((p.obs - r.fitted).array().square() * d.array()).sum();
    r.diagnostics.objective = r.diagnostics.rss + p.lambda * r.diagnostics.penalty;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dense path

FitResult solve_dense(const FitProblem& p, const KMatrix& k, const Eigen::MatrixXd& t_matrix,
                      bool with_edf) {
    p.validate();
    const int n = p.size();
    const int m = p.basis->size();
    if (k.size() != n || t_matrix.rows() != n || t_matrix.cols() != m)
        throw std::invalid_argument("matrix dimensions do not match the problem");

    const Eigen::VectorXd d = p.effective_weights();
    Eigen::MatrixXd big_m = k.entries;
    big_m.diagonal() += p.lambda * d.cwiseInverse();

    Eigen::LDLT<Eigen::MatrixXd> m_fact(big_m);
    if (m_fact.info() != Eigen::Success)
        throw SingularM("factorisation of M = K + lambda D^{-1} failed");
    const Eigen::VectorXd z = m_fact.solve(p.obs);
    const Eigen::MatrixXd w = m_fact.solve(t_matrix);
    if (!z.allFinite() || !w.allFinite())
        throw SingularM("M = K + lambda D^{-1} is numerically singular");
    if (p.lambda == 0.0) {
        const double resid = (big_m * z - p.obs).norm();
        if (!(resid <= 1e-8 * (1.0 + p.obs.norm())))
            throw SingularM("lambda = 0 with numerically singular K");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> t_qr(t_matrix);
    if (t_qr.rank() < m) throw RankDeficientT("design matrix T is rank deficient");

    const Eigen::MatrixXd s = t_matrix.transpose() * w;  // T' M^{-1} T
    Eigen::LDLT<Eigen::MatrixXd> s_fact(0.5 * (s + s.transpose()));
    if (s_fact.info() != Eigen::Success)
        throw RankDeficientT("T' M^{-1} T is not positive definite");

    FitResult r;
    r.alpha = s_fact.solve(t_matrix.transpose() * z);
    r.beta = z - w * r.alpha;
    if (!r.alpha.allFinite() || !r.beta.allFinite())
        throw SingularM("dense solve produced non-finite coefficients");

    const Eigen::VectorXd k_beta = k.entries * r.beta;
    r.fitted = t_matrix * r.alpha + k_beta;
    fill_quadratic_diagnostics(p, k_beta, r);

    if (with_edf) {
        if (p.lambda == 0.0) {
            r.diagnostics.edf = static_cast<double>(n);
        } else {
            // tr A = n - lambda [tr(D^{-1}M^{-1}) - tr(D^{-1} W S^{-1} W')].
            const Eigen::MatrixXd m_inv = m_fact.solve(Eigen::MatrixXd::Identity(n, n));
            const Eigen::MatrixXd u = s_fact.solve(w.transpose());  // S^{-1} W'
            double tr = 0.0;
            for (int i = 0; i < n; ++i)
                tr += (m_inv(i, i) - w.row(i).dot(u.col(i))) / d(i);
            r.diagnostics.edf = n - p.lambda * tr;
        }
    }

    r.evaluator = make_evaluator(p, r.alpha, r.beta);
    return r;
}

// ---------------------------------------------------------------------------
// BandedQ

BandedQ::BandedQ(int n, int band) : n_(n), band_(band) {
    if (n < band || band < 1) throw std::invalid_argument("bad banded-Q dimensions");
    data_ = Eigen::MatrixXd::Zero(band + 1, std::max(0, n - band));
}

double BandedQ::coeff(int i, int j) const {
    const int off = i - j;
    if (off < 0 || off > band_ || j < 0 || j >= cols()) return 0.0;
    return data_(off, j);
}

Eigen::VectorXd BandedQ::apply(const Eigen::VectorXd& g) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    for (int j = 0; j < cols(); ++j)
        for (int off = 0; off <= band_; ++off) y(j + off) += data_(off, j) * g(j);
    return y;
}

Eigen::VectorXd BandedQ::transpose_apply(const Eigen::VectorXd& y) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(cols());
    for (int j = 0; j < cols(); ++j)
        for (int off = 0; off <= band_; ++off) g(j) += data_(off, j) * y(j + off);
    return g;
}

Eigen::MatrixXd BandedQ::dense() const {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n_, cols());
    for (int j = 0; j < cols(); ++j)
        for (int off = 0; off <= band_; ++off) q(j + off, j) = data_(off, j);
    return q;
}

BandedQ build_banded_q(const Eigen::MatrixXd& t_matrix) {
    const int n = static_cast<int>(t_matrix.rows());
    const int m = static_cast<int>(t_matrix.cols());
    if (n < m) throw std::invalid_argument("T must have at least m rows");
    BandedQ q(n, m);

    for (int i = 0; i + m < n; ++i) {
        const Eigen::MatrixXd block = t_matrix.block(i, 0, m + 1, m);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
        const Eigen::MatrixXd rfac =
            qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
        const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
        for (int kdiag = 0; kdiag < m; ++kdiag)
            if (std::abs(rfac(kdiag, kdiag)) <= 1e-12 * scale)
                throw DegenerateBlock("rank-deficient T block at row " + std::to_string(i));
        const Eigen::MatrixXd qfull = qr.householderQ();
        for (int off = 0; off <= m; ++off) q.entry(off, i) = qfull(off, m);
    }
    return q;
}

// ---------------------------------------------------------------------------
// Symmetric band storage and banded Cholesky

SymmetricBandMatrix::SymmetricBandMatrix(int n, int bandwidth) : n_(n), bw_(bandwidth) {
    if (n < 1 || bandwidth < 0) throw std::invalid_argument("bad band dimensions");
    diags_ = Eigen::MatrixXd::Zero(bandwidth + 1, n);
}

double SymmetricBandMatrix::at(int i, int j) const {
    if (i < j) std::swap(i, j);
    const int off = i - j;
    if (off > bw_) return 0.0;
    return diags_(off, j);
}

void SymmetricBandMatrix::set(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    const int off = i - j;
    if (off > bw_) throw std::out_of_range("entry outside the band");
    diags_(off, j) = v;
}

Eigen::VectorXd SymmetricBandMatrix::multiply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    for (int j = 0; j < n_; ++j) {
        y(j) += diags_(0, j) * x(j);
        for (int off = 1; off <= bw_ && j + off < n_; ++off) {
            y(j + off) += diags_(off, j) * x(j);
            y(j) += diags_(off, j) * x(j + off);
        }
    }
    return y;
}

Eigen::MatrixXd SymmetricBandMatrix::dense() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
        for (int off = 0; off <= bw_ && j + off < n_; ++off)
            a(j + off, j) = a(j, j + off) = diags_(off, j);
    return a;
}

BandedCholesky::BandedCholesky(const SymmetricBandMatrix& a)
    : n_(a.size()), bw_(a.bandwidth()) {
    l_ = Eigen::MatrixXd::Zero(bw_ + 1, n_);
    for (int j = 0; j < n_; ++j)
        for (int off = 0; off <= bw_ && j + off < n_; ++off) l_(off, j) = a.at(j + off, j);

    for (int j = 0; j < n_; ++j) {
        double diag = l_(0, j);
        for (int k = std::max(0, j - bw_); k < j; ++k) diag -= l_(j - k, k) * l_(j - k, k);
        if (!(diag > 0.0) || !std::isfinite(diag))
            throw CholeskyFailure("banded matrix not positive definite at pivot " +
                                  std::to_string(j));
        l_(0, j) = std::sqrt(diag);
        for (int i = j + 1; i <= std::min(n_ - 1, j + bw_); ++i) {
            double s = l_(i - j, j);
            for (int k = std::max(0, i - bw_); k < j; ++k) s -= l_(i - k, k) * l_(j - k, k);
            l_(i - j, j) = s / l_(0, j);
        }
    }
}

Eigen::VectorXd BandedCholesky::solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd z(n_);
    for (int j = 0; j < n_; ++j) {
        double s = rhs(j);
        for (int k = std::max(0, j - bw_); k < j; ++k) s -= l_(j - k, k) * z(k);
        z(j) = s / l_(0, j);
    }
    Eigen::VectorXd x(n_);
    for (int j = n_ - 1; j >= 0; --j) {
        double s = z(j);
        for (int i = j + 1; i <= std::min(n_ - 1, j + bw_); ++i) s -= l_(i - j, j) * x(i);
        x(j) = s / l_(0, j);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Banded path

bool banded_eligible(const FitProblem& p) {
    if (!all_point_eval(p.functionals)) return false;
    if (!(p.lambda > 0.0)) return false;
    const int n = p.size();
    const int m = p.basis->size();
    if (n <= m) return false;
    const Interval domain = p.basis->domain();
    const auto pts = p.point_locations();
    if (!(domain.a < pts.front()) || !(pts.back() < domain.b)) return false;
    for (int i = 1; i < n; ++i)
        if (!(pts[i - 1] < pts[i])) return false;
    return true;
}

FitResult solve_banded(const FitProblem& p, const Eigen::MatrixXd& t_matrix, const BandedQ& q) {
    p.validate();
    if (!all_point_eval(p.functionals))
        throw NotPointEval("banded path requires point-evaluation functionals");
    if (!(p.lambda > 0.0)) throw std::invalid_argument("banded path requires lambda > 0");

    const int n = p.size();
    const int m = p.basis->size();
    const auto pts = p.point_locations();
    const Interval domain = p.basis->domain();
    if (!(domain.a < pts.front()) || !(pts.back() < domain.b))
        throw std::invalid_argument("banded path requires a < t_1 and t_n < b");
    for (int i = 1; i < n; ++i)
        if (!(pts[i - 1] < pts[i]))
            throw std::invalid_argument("banded path requires strictly increasing design points");
    if (t_matrix.rows() != n || t_matrix.cols() != m || q.rows() != n || q.band() != m)
        throw std::invalid_argument("matrix dimensions do not match the problem");

    const Eigen::VectorXd d = p.effective_weights();
    const double lambda = p.lambda;

    // Kernel band through cumulative star products: K(i,j) = v_i' Phi(t_j) v_j
    // for j <= i. Only 2m+1 diagonals ever enter Q'MQ.
    const auto prefix = p.kernel->star_integral_prefix(pts);
    std::vector<Eigen::VectorXd> w(n);
    for (int j = 0; j < n; ++j) w[j] = prefix[j] * t_matrix.row(j).transpose();
    const int kbw = std::min(2 * m, n - 1);
    Eigen::MatrixXd k_band = Eigen::MatrixXd::Zero(kbw + 1, n);
    for (int j = 0; j < n; ++j)
        for (int off = 0; off <= kbw && j + off < n; ++off)
            k_band(off, j) = t_matrix.row(j + off).dot(w[j]);

    auto m_entry = [&](int r, int c) {
        if (r < c) std::swap(r, c);
        double v = (r - c <= kbw) ? k_band(r - c, c) : 0.0;
        if (r == c) v += lambda / d(r);
        return v;
    };

    const int ncols = q.cols();
    FitResult r;
    if (ncols == 0) {
        r.beta = Eigen::VectorXd::Zero(n);
    } else {
        SymmetricBandMatrix qmq(ncols, std::min(m, ncols - 1));
        for (int k = 0; k < ncols; ++k)
            for (int dd = 0; dd <= qmq.bandwidth() && k + dd < ncols; ++dd) {
                const int l = k + dd;
                double sum = 0.0;
                for (int i = 0; i <= m; ++i)
                    for (int j = 0; j <= m; ++j)
                        sum += q.entry(i, l) * m_entry(l + i, k + j) * q.entry(j, k);
                qmq.set(l, k, sum);
            }
        BandedCholesky chol(qmq);
        const Eigen::VectorXd gamma = chol.solve(q.transpose_apply(p.obs));
        r.beta = q.apply(gamma);
    }

    // K beta in O(n m^2): suffix sums s_k = sum_{j>=k} beta_j v_j and
    // increments Delta_k = Phi(t_k) - Phi(t_{k-1}) give
    // (K beta)_i = v_i' sum_{k<=i} Delta_k s_k.
    Eigen::VectorXd k_beta(n);
    {
        std::vector<Eigen::VectorXd> suffix(n + 1, Eigen::VectorXd::Zero(m));
        for (int j = n - 1; j >= 0; --j)
            suffix[j] = suffix[j + 1] + r.beta(j) * t_matrix.row(j).transpose();
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
        Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < n; ++i) {
            acc += (prefix[i] - prev) * suffix[i];
            prev = prefix[i];
            k_beta(i) = t_matrix.row(i).dot(acc);
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> t_qr(t_matrix);
    if (t_qr.rank() < m) throw RankDeficientT("design matrix T is rank deficient");
    const Eigen::VectorXd m_beta = k_beta + lambda * r.beta.cwiseQuotient(d);
    r.alpha = t_qr.solve(p.obs - m_beta);

    r.fitted = p.obs - lambda * r.beta.cwiseQuotient(d);
    fill_quadratic_diagnostics(p, k_beta, r);
    r.evaluator = make_evaluator(p, r.alpha, r.beta);
    return r;
}

// ---------------------------------------------------------------------------
// Logistic path

namespace {

double logistic_objective(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, double lambda,
                          const Eigen::MatrixXd& k, const Eigen::VectorXd& beta) {
    double obj = 0.0;
    for (int j = 0; j < y.size(); ++j) {
        const double x = -y(j) * mu(j);
        obj += x > 35.0 ? x : std::log1p(std::exp(x));
    }
    return obj + lambda * beta.dot(k * beta);
}

}  // namespace

FitResult solve_logistic(const FitProblem& p, const KMatrix& k, const Eigen::MatrixXd& t_matrix) {
    p.validate();
    if (!all_point_eval(p.functionals))
        throw NotPointEval("logistic path requires point-evaluation functionals");
    if (!(p.lambda > 0.0)) throw std::invalid_argument("logistic path requires lambda > 0");
    const int n = p.size();
    const int m = p.basis->size();
    const Eigen::VectorXd& y = p.obs;
    for (int j = 0; j < n; ++j)
        if (y(j) != 1.0 && y(j) != -1.0)
            throw std::invalid_argument("logistic labels must be -1 or +1");
    bool one_class = std::abs(y.sum()) == static_cast<double>(n);

    const double lambda = p.lambda;
    const Eigen::MatrixXd& km = k.entries;

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);

    FitResult r;
    double obj = logistic_objective(y, mu, lambda, km, beta);
    r.objective_trace.push_back(obj);

    const double grad_tol = 1e-8;
    const int max_iter = 100;
    bool converged = false;
    double grad_norm = 0.0;

    for (int iter = 0; iter < max_iter; ++iter) {
        // g_j = -Y_j sigma(-Y_j mu_j), v_j = sigma(mu_j) sigma(-mu_j).
        Eigen::VectorXd g(n), v(n);
        for (int j = 0; j < n; ++j) {
            const double z = y(j) * mu(j);
            const double e = std::exp(-std::abs(z));
            g(j) = -y(j) * (z >= 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e));
            v(j) = e / ((1.0 + e) * (1.0 + e));
        }
        Eigen::VectorXd grad(m + n);
        grad.head(m) = t_matrix.transpose() * g;
        grad.tail(n) = km * (g + 2.0 * lambda * beta);
        grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (grad_norm <= grad_tol) {
            converged = true;
            break;
        }

        Eigen::MatrixXd h(m + n, m + n);
        const Eigen::MatrixXd vt = v.asDiagonal() * t_matrix;  // V T
        const Eigen::MatrixXd vk = v.asDiagonal() * km;        // V K
        h.topLeftCorner(m, m) = t_matrix.transpose() * vt;
        h.topRightCorner(m, n) = vt.transpose() * km;
        h.bottomLeftCorner(n, m) = h.topRightCorner(m, n).transpose();
        h.bottomRightCorner(n, n) = km * vk + 2.0 * lambda * km;

        Eigen::VectorXd step;
        double ridge = 0.0;
        for (int attempt = 0; attempt < 4; ++attempt) {
            Eigen::MatrixXd hr = h;
            if (ridge > 0.0) hr.diagonal().array() += ridge;
            Eigen::LDLT<Eigen::MatrixXd> fact(hr);
            step = fact.solve(-grad);
            if (fact.info() == Eigen::Success && step.allFinite() && grad.dot(step) < 0.0)
                break;
            ridge = ridge == 0.0 ? 1e-10 * (1.0 + h.diagonal().cwiseAbs().maxCoeff())
                                 : ridge * 100.0;
            step.setZero();
        }
        if (step.isZero()) step = -grad;  // last resort: steepest descent

        double scale = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half) {
            const Eigen::VectorXd alpha_try = alpha + scale * step.head(m);
            const Eigen::VectorXd beta_try = beta + scale * step.tail(n);
            const Eigen::VectorXd mu_try = t_matrix * alpha_try + km * beta_try;
            const double obj_try = logistic_objective(y, mu_try, lambda, km, beta_try);
            if (obj_try < obj) {
                alpha = alpha_try;
                beta = beta_try;
                mu = mu_try;
                obj = obj_try;
                r.objective_trace.push_back(obj);
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) break;  // no further decrease; the gradient check decides
    }

    if (!converged) {
        // Re-check the gradient at the final iterate before giving up.
        Eigen::VectorXd g(n);
        for (int j = 0; j < n; ++j) {
            const double z = y(j) * mu(j);
            const double e = std::exp(-std::abs(z));
            g(j) = -y(j) * (z >= 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e));
        }
        Eigen::VectorXd grad(m + n);
        grad.head(m) = t_matrix.transpose() * g;
        grad.tail(n) = km * (g + 2.0 * lambda * beta);
        grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (grad_norm <= grad_tol) converged = true;
    }
    if (!converged)
        throw NonConvergence("logistic Newton did not converge; gradient inf-norm = " +
                             std::to_string(grad_norm));

    r.alpha = alpha;
    r.beta = beta;
    r.fitted = mu;
    r.separation_warning = one_class || mu.cwiseAbs().maxCoeff() > 30.0;
    r.diagnostics.penalty = beta.dot(km * beta);
    r.diagnostics.rss = std::numeric_limits<double>::quiet_NaN();
    r.diagnostics.objective = obj;
    r.evaluator = make_evaluator(p, r.alpha, r.beta);
    return r;
}

// ---------------------------------------------------------------------------
// Lambda selection

LambdaSelection select_lambda(const FitProblem& p, const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("empty lambda grid");
    for (double l : grid)
        if (!(l > 0.0) || !std::isfinite(l))
            throw std::invalid_argument("lambda grid entries must be positive and finite");
    p.validate();

    const KMatrix k = assemble_k(p.functionals, *p.kernel);
    const Eigen::MatrixXd t_matrix =
        design_matrix(p.functionals, *p.basis, p.kernel->quadrature_options());
    const int n = p.size();

    LambdaSelection sel;
    sel.table.reserve(grid.size());
    double best_score = std::numeric_limits<double>::infinity();
    for (double lambda : grid) {
        FitProblem q = p;
        q.lambda = lambda;
        const FitResult r = solve_dense(q, k, t_matrix, /*with_edf=*/true);
        LambdaScore score;
        score.lambda = lambda;
        score.edf = r.diagnostics.edf;
        score.rss = r.diagnostics.rss;
        const double denom = n - r.diagnostics.edf;
        score.gcv = denom > 1e-8 ? n * score.rss / (denom * denom)
                                 : std::numeric_limits<double>::infinity();
        sel.table.push_back(score);
        if (score.gcv < best_score) {
            best_score = score.gcv;
            sel.best = lambda;
        }
    }
    return sel;
}

// ---------------------------------------------------------------------------
// Front door

FitResult solve(const FitProblem& p, SolvePath path) {
    p.validate();
    if (path == SolvePath::Auto) path = banded_eligible(p) ? SolvePath::Banded : SolvePath::Dense;

    if (path == SolvePath::Banded) {
        if (!all_point_eval(p.functionals))
            throw NotPointEval("banded path requires point-evaluation functionals");
        const Eigen::MatrixXd t_matrix = p.basis->value_matrix(p.point_locations());
        const BandedQ q = build_banded_q(t_matrix);
        return solve_banded(p, t_matrix, q);
    }
    const KMatrix k = assemble_k(p.functionals, *p.kernel);
    const Eigen::MatrixXd t_matrix =
        design_matrix(p.functionals, *p.basis, p.kernel->quadrature_options());
    return solve_dense(p, k, t_matrix);
}

}  // namespace lspline
