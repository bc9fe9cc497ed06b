#include "flatnormal/principal.hpp"

#include "flatnormal/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace flatnormal {

namespace {

// Deterministic weights in [0.5, 1.5): independent of the standard library's
// distribution implementations.
Eigen::VectorXd generic_weights(int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd w(p);
    for (int a = 0; a < p; ++a) w[a] = 0.5 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return w;
}

int first_significant(const Eigen::VectorXd& x) {
    const double scale = x.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < x.size(); ++k)
        if (std::abs(x[k]) > 1e-6 * scale) return static_cast<int>(k);
    return 0;
}

void canonical_sign(Eigen::Ref<Eigen::VectorXd> x) {
    if (x[first_significant(x)] < 0.0) x = -x;
}

}  // namespace

bool PrincipalDecomposition::all_simple() const {
    return std::all_of(multiplicities.begin(), multiplicities.end(), [](int m) { return m == 1; });
}

Eigen::MatrixXd joint_diagonalize(const std::vector<Eigen::MatrixXd>& matrices, double tolerance, int max_sweeps) {
    if (matrices.empty()) throw Error(ErrorKind::argument, "joint_diagonalize needs at least one matrix");
    const auto n = matrices.front().rows();
    std::vector<Eigen::MatrixXd> A = matrices;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                // Closed-form optimal Givens angle for the pair (p, q).
                double ton = 0.0, toff = 0.0;
                for (const auto& M : A) {
                    const double h1 = M(p, p) - M(q, q);
                    const double h2 = M(p, q) + M(q, p);
                    ton += h1 * h1 - h2 * h2;
                    toff += 2.0 * h1 * h2;
                }
                const double theta = 0.5 * std::atan2(toff, ton + std::hypot(ton, toff));
                const double c = std::cos(theta), s = std::sin(theta);
                if (std::abs(s) <= tolerance) continue;
                rotated = true;
                for (auto& M : A) {
                    const Eigen::VectorXd Mp = M.col(p), Mq = M.col(q);
                    M.col(p) = c * Mp + s * Mq;
                    M.col(q) = -s * Mp + c * Mq;
                    const Eigen::RowVectorXd Rp = M.row(p), Rq = M.row(q);
                    M.row(p) = c * Rp + s * Rq;
                    M.row(q) = -s * Rp + c * Rq;
                }
                const Eigen::VectorXd Qp = Q.col(p), Qq = Q.col(q);
                Q.col(p) = c * Qp + s * Qq;
                Q.col(q) = -s * Qp + c * Qq;
            }
        }
        if (!rotated) return Q;
    }
    throw Error(ErrorKind::numerical, "joint diagonalisation did not converge");
}

PrincipalDecomposition principal_decomposition(const FundamentalData& fd, std::optional<double> C,
                                               const PrincipalOptions& options) {
    const int n = fd.n();
    const int p = fd.p();
    const auto H = fd.shape_operators();
    const double alpha_norm = std::sqrt(fd.sff_norm_sq);
    const double tau = options.cluster_threshold * std::max(alpha_norm, 1.0);

    PrincipalDecomposition out;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
    if (p > 0) {
        const Eigen::VectorXd w = generic_weights(p, options.seed);
        Eigen::MatrixXd Hw = Eigen::MatrixXd::Zero(n, n);
        for (int a = 0; a < p; ++a) Hw += w[a] * H[static_cast<std::size_t>(a)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hw);
        if (eig.info() != Eigen::Success) throw Error(ErrorKind::numerical, "eigen-decomposition failed");
        Q = eig.eigenvectors();
        const Eigen::VectorXd ev = eig.eigenvalues();
        bool collide = false;
        for (int k = 0; k + 1 < n; ++k) collide = collide || (ev[k + 1] - ev[k] <= tau);
        if (collide && p > 1) {
            Q = joint_diagonalize(H);
            out.joint_fallback = true;
        }
    }

    // Tangent directions in chart coordinates and their curvature normals.
    const Eigen::MatrixXd B = fd.orthonormal_basis();
    std::vector<Eigen::VectorXd> X(static_cast<std::size_t>(n));
    std::vector<Eigen::VectorXd> eta(static_cast<std::size_t>(n), Eigen::VectorXd::Zero(p));
    for (int k = 0; k < n; ++k) {
        X[static_cast<std::size_t>(k)] = B * Q.col(k);
        canonical_sign(X[static_cast<std::size_t>(k)]);
        for (int a = 0; a < p; ++a) {
            const Eigen::VectorXd q = Q.col(k);
            eta[static_cast<std::size_t>(k)][a] = q.dot(H[static_cast<std::size_t>(a)] * q);
        }
    }

    // Cluster directions that share a curvature normal.
    std::vector<std::vector<int>> groups;
    for (int k = 0; k < n; ++k) {
        bool placed = false;
        for (auto& grp : groups) {
            if ((eta[static_cast<std::size_t>(grp.front())] - eta[static_cast<std::size_t>(k)]).norm() <= tau) {
                grp.push_back(k);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({k});
    }

    struct Group {
        Eigen::VectorXd eta;
        Eigen::MatrixXd dirs;
        double norm;
        int lead;
    };
    std::vector<Group> gs;
    for (const auto& grp : groups) {
        Group g;
        g.eta = Eigen::VectorXd::Zero(p);
        g.dirs.resize(n, static_cast<Eigen::Index>(grp.size()));
        for (std::size_t m = 0; m < grp.size(); ++m) {
            g.eta += eta[static_cast<std::size_t>(grp[m])];
            g.dirs.col(static_cast<Eigen::Index>(m)) = X[static_cast<std::size_t>(grp[m])];
        }
        g.eta /= static_cast<double>(grp.size());
        g.norm = g.eta.norm();
        g.lead = first_significant(g.dirs.col(0));
        gs.push_back(std::move(g));
    }

    // Insertion sort: the tolerance-based comparison is not a strict weak order.
    auto before = [&](const Group& a, const Group& b) {
        if (std::abs(a.norm - b.norm) > tau) return a.norm > b.norm;
        if (a.lead != b.lead) return a.lead < b.lead;
        return a.dirs(a.lead, 0) > b.dirs(b.lead, 0);
    };
    for (std::size_t i = 1; i < gs.size(); ++i)
        for (std::size_t j = i; j > 0 && before(gs[j], gs[j - 1]); --j) std::swap(gs[j], gs[j - 1]);

    for (auto& g : gs) {
        out.multiplicities.push_back(static_cast<int>(g.dirs.cols()));
        out.etas.push_back(std::move(g.eta));
        out.directions.push_back(std::move(g.dirs));
    }
    out.s = static_cast<int>(out.etas.size());

    if (C) {
        if (!(*C > 0.0) && !options.exploratory)
            throw Error(ErrorKind::hypothesis, "C = c~ - c must be positive to form lambda_i");
        for (const auto& e : out.etas) {
            const double q = e.squaredNorm() + *C;
            if (!(q > 0.0)) throw Error(ErrorKind::hypothesis, "||eta_i||^2 + C <= 0: lambda_i undefined");
            out.lambdas.push_back(1.0 / std::sqrt(q));
        }
    }
    return out;
}

Eigen::MatrixXd third_fundamental_form(const FundamentalData& fd) {
    const int n = fd.n();
    Eigen::MatrixXd III = Eigen::MatrixXd::Zero(n, n);
    for (const auto& h : fd.alpha) III += h * fd.g_inverse * h;
    return 0.5 * (III + III.transpose());
}

ComparisonMetric comparison_metric(const FundamentalData& fd, const Eigen::MatrixXd& III, double C,
                                   bool exploratory) {
    if (!(C > 0.0) && !exploratory)
        throw Error(ErrorKind::hypothesis, "comparison metric requires C > 0 (or exploratory mode)");
    ComparisonMetric m;
    m.C = C;
    m.g0 = C * fd.g + III;
    Eigen::LLT<Eigen::MatrixXd> llt(m.g0);
    m.positive_definite = llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 0.0;
    return m;
}

Eigen::VectorXd PrincipalFrame::lambdas(double C) const {
    return (eta_norm_sq.array() + C).rsqrt().matrix();
}

PrincipalFrame principal_frame(const FundamentalData& fd, const PrincipalDecomposition& d) {
    const int n = fd.n();
    if (d.s != n || !d.all_simple())
        throw Error(ErrorKind::hypothesis, "principal normals are not all simple (s = " + std::to_string(d.s) + ")");
    PrincipalFrame f;
    f.directions.resize(n, n);
    f.etas.resize(fd.normal_frame.rows(), n);
    f.eta_components.resize(fd.p(), n);
    f.eta_norm_sq.resize(n);
    for (int i = 0; i < n; ++i) {
        f.directions.col(i) = d.directions[static_cast<std::size_t>(i)].col(0);
        f.eta_components.col(i) = d.etas[static_cast<std::size_t>(i)];
        f.etas.col(i) = fd.normal_vector(d.etas[static_cast<std::size_t>(i)]);
        f.eta_norm_sq[i] = d.etas[static_cast<std::size_t>(i)].squaredNorm();
    }
    return f;
}

AlignmentStatus align_frame(const PrincipalFrame& reference, PrincipalFrame& candidate, const Eigen::MatrixXd& g,
                            double ambiguity) {
    const int n = reference.n();
    const Eigen::MatrixXd M = reference.directions.transpose() * g * candidate.directions;
    std::vector<int> perm(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    AlignmentStatus status = AlignmentStatus::ok;
    for (int i = 0; i < n; ++i) {
        int best = -1;
        double b1 = -1.0, b2 = -1.0;
        for (int j = 0; j < n; ++j) {
            const double v = std::abs(M(i, j));
            if (v > b1) {
                b2 = b1;
                b1 = v;
                best = j;
            } else if (v > b2) {
                b2 = v;
            }
        }
        if (n > 1 && b1 - b2 < ambiguity) status = AlignmentStatus::ambiguous;
        if (used[static_cast<std::size_t>(best)]) return AlignmentStatus::ambiguous;
        used[static_cast<std::size_t>(best)] = true;
        perm[static_cast<std::size_t>(i)] = best;
    }
    PrincipalFrame out = candidate;
    for (int i = 0; i < n; ++i) {
        const int j = perm[static_cast<std::size_t>(i)];
        const double sign = M(i, j) < 0.0 ? -1.0 : 1.0;
        out.directions.col(i) = sign * candidate.directions.col(j);
        out.etas.col(i) = candidate.etas.col(j);
        out.eta_components.col(i) = candidate.eta_components.col(j);
        out.eta_norm_sq[i] = candidate.eta_norm_sq[j];
    }
    candidate = std::move(out);
    return status;
}

}  // namespace flatnormal
