#include "epc/attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epc/errors.hpp"

namespace epc {

namespace {

Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

void require_finite(const Matrix& m, const char* stage) {
    for (double v : m.data()) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string("non-finite value while computing ") + stage);
        }
    }
}

} // namespace

Matrix attention(const Matrix& x, const Matrix& x_prime, const AttentionWeights& w) {
    validate_matrix(x);
    validate_matrix(x_prime);
    validate_matrix(w.w_q);
    validate_matrix(w.w_k);
    validate_matrix(w.w_v);
    if (w.w_q.rows() != x.cols()) {
        throw DimensionError("W_q rows (" + std::to_string(w.w_q.rows()) +
                             ") must match X columns (" + std::to_string(x.cols()) + ")");
    }
    if (w.w_k.rows() != x_prime.cols() || w.w_v.rows() != x_prime.cols()) {
        throw DimensionError("W_k/W_v rows must match X' columns (" +
                             std::to_string(x_prime.cols()) + ")");
    }
    if (w.w_q.cols() != w.w_k.cols()) {
        throw DimensionError("W_q and W_k must project to the same width D");
    }

    const Matrix q = matmul(x, w.w_q);
    const Matrix k = matmul(x_prime, w.w_k);
    const Matrix v = matmul(x_prime, w.w_v);
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.w_q.cols()));

    Matrix scores(q.rows(), k.rows());
    for (std::size_t i = 0; i < q.rows(); ++i) {
        for (std::size_t j = 0; j < k.rows(); ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < q.cols(); ++c) dot += q(i, c) * k(j, c);
            scores(i, j) = dot * scale;
        }
    }
    require_finite(scores, "the attention scores");

    // Row softmax with max subtraction; exp arguments are <= 0 afterwards.
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        auto row = scores.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (double& s : row) {
            s = std::exp(s - mx);
            sum += s;
        }
        for (double& s : row) s /= sum;
    }

    Matrix out = matmul(scores, v);
    require_finite(out, "the attention output");
    return out;
}

InvarianceReport check_cross_attention_invariance(const Matrix& x, const Matrix& x_prime,
                                                  const AttentionWeights& w,
                                                  std::span<const std::size_t> perm,
                                                  double tol) {
    const Matrix base = attention(x, x_prime, w);
    const Matrix permuted = attention(x, permute_rows(x_prime, perm), w);

    InvarianceReport report;
    for (std::size_t i = 0; i < base.rows(); ++i) {
        for (std::size_t j = 0; j < base.cols(); ++j) {
            report.max_deviation =
                std::max(report.max_deviation, std::abs(base(i, j) - permuted(i, j)));
        }
    }
    report.within_tol = report.max_deviation <= tol;
    return report;
}

} // namespace epc
