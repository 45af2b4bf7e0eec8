#include "oneill/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace oneill {

namespace {
Eigen::MatrixXd to_eigen(const Mat<double>& m) {
    Eigen::MatrixXd e(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
    return e;
}
}  // namespace

double norm(const Vec<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double norm(const Mat<double>& G, const Vec<double>& x) {
    double s = dot(G, x, x);
    return std::sqrt(s > 0 ? s : 0);
}

std::vector<double> sym_eigenvalues(const Mat<double>& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
    std::vector<double> out(m.rows);
    for (int i = 0; i < m.rows; ++i) out[i] = es.eigenvalues()[i];
    return out;
}

std::pair<std::vector<double>, Mat<double>> sym_eigen(const Mat<double>& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
    std::vector<double> vals(m.rows);
    Mat<double> vecs(m.rows, m.rows);
    for (int i = 0; i < m.rows; ++i) {
        vals[i] = es.eigenvalues()[i];
        for (int r = 0; r < m.rows; ++r) vecs(r, i) = es.eigenvectors()(r, i);
    }
    return {vals, vecs};
}

std::vector<double> singular_values(const Mat<double>& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    std::vector<double> out(svd.singularValues().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = svd.singularValues()[i];
    return out;
}

std::vector<Vec<double>> gram_schmidt(const Mat<double>& G, const std::vector<Vec<double>>& cand,
                                      double rel_tol) {
    // The drop threshold is relative to the largest candidate, not to each
    // candidate's own norm: a candidate that is itself numerical noise (for
    // example the dependent column of a projector, which cancels to ~1e-16)
    // points in a random direction and would otherwise survive.
    double scale = 0.0;
    for (const auto& c : cand) scale = std::max(scale, norm(G, c));
    if (scale <= 0.0) return {};

    std::vector<Vec<double>> basis;
    for (const auto& c : cand) {
        Vec<double> v = c;
        if (norm(G, v) < rel_tol * scale) continue;
        for (const auto& b : basis) {
            double p = dot(G, b, v);
            v = vec_sub(v, vec_scale(p, b));
        }
        // Second pass: re-orthogonalize, cheap insurance at these sizes.
        for (const auto& b : basis) {
            double p = dot(G, b, v);
            v = vec_sub(v, vec_scale(p, b));
        }
        double n1 = norm(G, v);
        if (n1 < rel_tol * scale) continue;
        basis.push_back(vec_scale(1.0 / n1, v));
    }
    return basis;
}

}  // namespace oneill
