#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "gridwar/common.hpp"

namespace gridwar {

struct LogisticFit {
    Eigen::VectorXd beta;
    double log_likelihood = 0.0;
    int iterations = 0;
};

struct LogisticOptions {
    double tol = 1e-8;           // convergence threshold on log-likelihood change
    int max_iter = 50;
    double separation_bound = 15.0;  // |coef| beyond this on the logit scale
};

inline double sigmoid(double z) {
    // Split to avoid overflow in exp for large |z|.
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

inline double bernoulli_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        // log p if y=1, log(1-p) if y=0, in the stable log1p(exp) form.
        double z = eta[i];
        double log_sig = z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
        double log_one_minus = log_sig - z;  // log(1-sigmoid(z)) = log(sigmoid(z)) - z
        ll += y[i] > 0.5 ? log_sig : log_one_minus;
    }
    return ll;
}

// Maximum-likelihood logistic regression by iteratively reweighted least
// squares. `column_names` (optional, aligned with columns of X) makes the
// quasi-separation error name the offending level.
inline LogisticFit fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const LogisticOptions& opts = {},
                                const std::vector<std::string>* column_names = nullptr) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (n == 0) throw ValidationError("logistic fit: empty design");

    bool has_zero = false, has_one = false;
    for (Eigen::Index i = 0; i < n; ++i) (y[i] > 0.5 ? has_one : has_zero) = true;
    if (!has_zero || !has_one)
        throw ValidationError("logistic fit: response takes a single value; model not identifiable");

    auto check_separation = [&](const Eigen::VectorXd& beta) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (std::abs(beta[j]) > opts.separation_bound) {
                std::string name = column_names && static_cast<std::size_t>(j) < column_names->size()
                                       ? (*column_names)[j]
                                       : "column " + std::to_string(j);
                throw ValidationError("logistic fit: quasi-separation detected at level '" + name +
                                      "' (|coefficient| > " +
                                      std::to_string(opts.separation_bound) + ")");
            }
        }
    };

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double ll = bernoulli_log_likelihood(X, y, beta);

    std::string trace;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd mu(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu[i] = sigmoid(eta[i]);
            w[i] = std::max(mu[i] * (1.0 - mu[i]), 1e-10);
        }
        // Newton step: (X' W X) d = X'(y - mu)
        Eigen::MatrixXd XtWX = X.transpose() * w.asDiagonal() * X;
        Eigen::VectorXd grad = X.transpose() * (y - mu);
        Eigen::LDLT<Eigen::MatrixXd> solver(XtWX);
        if (solver.info() != Eigen::Success)
            throw ValidationError("logistic fit: weighted normal equations are singular "
                                  "(design not full rank)");
        Eigen::VectorXd step = solver.solve(grad);

        // Halve the step until the likelihood does not decrease.
        double new_ll = ll;
        Eigen::VectorXd candidate = beta;
        double scale = 1.0;
        for (int h = 0; h < 30; ++h) {
            candidate = beta + scale * step;
            new_ll = bernoulli_log_likelihood(X, y, candidate);
            if (std::isfinite(new_ll) && new_ll >= ll - 1e-12) break;
            scale *= 0.5;
        }
        double change = new_ll - ll;
        beta = candidate;
        ll = new_ll;
        trace += "iter " + std::to_string(iter) + ": ll=" + std::to_string(ll) + "\n";

        if (std::abs(change) < opts.tol) {
            check_separation(beta);
            return {beta, ll, iter};
        }
    }
    check_separation(beta);  // diverging coefficients explain most non-convergence
    throw ValidationError("logistic fit: no convergence in " + std::to_string(opts.max_iter) +
                          " iterations; trace:\n" + trace);
}

}  // namespace gridwar
