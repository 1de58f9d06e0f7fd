#pragma once
#include <span>

#include "epc/matrix.hpp"

namespace epc {

/// Projection weights for one attention block: Q = X W_q, K = X' W_k,
/// V = X' W_v. W_q is d_x x D, W_k is d_x' x D, W_v is d_x' x D_v.
struct AttentionWeights {
    Matrix w_q;
    Matrix w_k;
    Matrix w_v;
};

/// softmax_row(Q K^T / sqrt(D)) V with per-row max subtraction before
/// exponentiation. Cross-attention when x != x_prime.
Matrix attention(const Matrix& x, const Matrix& x_prime, const AttentionWeights& w);

struct InvarianceReport {
    bool within_tol = false;
    double max_deviation = 0.0; // max-norm difference between the two outputs
};

/// Compares attention(x, x', w) against attention(x, p x', w): permuting the
/// conditioning rows must leave the output unchanged up to roundoff.
InvarianceReport check_cross_attention_invariance(const Matrix& x, const Matrix& x_prime,
                                                  const AttentionWeights& w,
                                                  std::span<const std::size_t> perm,
                                                  double tol);

} // namespace epc
