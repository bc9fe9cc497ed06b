#include "flatnormal/ambient.hpp"

#include "flatnormal/error.hpp"

#include <cmath>

namespace flatnormal {

const char* to_string(AmbientKind kind) noexcept {
    switch (kind) {
        case AmbientKind::euclidean: return "euclidean";
        case AmbientKind::sphere: return "sphere";
        case AmbientKind::hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "domain";
        case ErrorKind::model_consistency: return "model-consistency";
        case ErrorKind::degeneracy: return "degeneracy";
        case ErrorKind::frame: return "frame";
        case ErrorKind::numerical: return "numerical";
        case ErrorKind::hypothesis: return "hypothesis-violation";
        case ErrorKind::argument: return "argument";
        case ErrorKind::parse: return "parse";
        case ErrorKind::integration: return "integration";
    }
    return "unknown";
}

AmbientModel AmbientModel::euclidean(int m) {
    AmbientModel a{AmbientKind::euclidean, 0.0, m};
    a.validate();
    return a;
}

AmbientModel AmbientModel::sphere(int m, double curvature) {
    AmbientModel a{AmbientKind::sphere, curvature, m};
    a.validate();
    return a;
}

AmbientModel AmbientModel::hyperbolic(int m, double curvature) {
    AmbientModel a{AmbientKind::hyperbolic, curvature, m};
    a.validate();
    return a;
}

double AmbientModel::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    double s = a.dot(b);
    if (kind == AmbientKind::hyperbolic) {
        const auto last = a.size() - 1;
        s -= 2.0 * a[last] * b[last];
    }
    return s;
}

Eigen::VectorXd AmbientModel::signature() const {
    Eigen::VectorXd d = Eigen::VectorXd::Ones(container_dimension());
    if (kind == AmbientKind::hyperbolic) d[d.size() - 1] = -1.0;
    return d;
}

double AmbientModel::constraint_defect(const Eigen::VectorXd& x) const {
    if (is_flat()) return 0.0;
    return std::abs(inner(x, x) - 1.0 / curvature);
}

void AmbientModel::validate() const {
    if (dimension < 1) throw Error(ErrorKind::argument, "ambient dimension must be positive");
    switch (kind) {
        case AmbientKind::euclidean:
            if (curvature != 0.0) throw Error(ErrorKind::argument, "euclidean ambient requires curvature 0");
            break;
        case AmbientKind::sphere:
            if (!(curvature > 0.0)) throw Error(ErrorKind::argument, "sphere ambient requires curvature > 0");
            break;
        case AmbientKind::hyperbolic:
            if (!(curvature < 0.0)) throw Error(ErrorKind::argument, "hyperbolic ambient requires curvature < 0");
            break;
    }
}

}  // namespace flatnormal
