#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "pucycle/core_math.hpp"
#include "pucycle/params.hpp"

namespace pucycle {

enum class UnaryKind : std::uint8_t { Tanh, Sigmoid, Softplus };

/// Eager reverse-mode tape over vector-valued primitives. The op set is
/// exactly what the sequence networks need: affine layers against named
/// parameter blocks, elementwise nonlinearities and arithmetic, slicing and
/// concatenation, the Cholesky covariance map and the Gaussian NLL head.
///
/// A tape can span several ParamStores (the joint cycle differentiates two
/// networks at once); backward() returns one flat gradient per store,
/// aligned with that store's flat parameter vector. Buffers are arena-backed
/// and reset() keeps their capacity, so per-sequence reuse does not allocate.
class Tape {
  public:
    explicit Tape(std::vector<const ParamStore*> stores);

    void reset();

    int constant(std::span<const double> v);
    int constant(std::initializer_list<double> v);
    int constant(const Vec2& v) { return constant({v.x, v.y}); }
    int zeros(int n);

    /// y = W x + b with W of shape [rows, cols] and b of shape [rows].
    int affine(int store, int w_block, int b_block, int x);
    int unary(UnaryKind kind, int x);
    int add(int a, int b);
    int sub(int a, int b);
    int mul(int a, int b);
    int one_minus(int a);
    int scale(int a, double c);
    int concat(std::span<const int> parts);
    int concat(std::initializer_list<int> parts);
    int slice(int a, int offset, int len);

    /// Free covariance entries (sxx, sxy, syy) of L L^T for the softplus
    /// Cholesky parametrization of `raw` (3 values).
    int chol_cov_entries(int raw);

    /// Scalar node: -log N(target | mean, cov(raw)) with the same
    /// parametrization as chol_cov_entries.
    int gaussian_nll(int mean, int raw, const Vec2& target);

    std::span<const double> value(int id) const;
    int length(int id) const;
    std::size_t node_count() const { return nodes_.size(); }

    /// Reverse pass from a scalar node. Returns per-store flat gradients,
    /// zero for parameters the output does not depend on. Valid until the
    /// next backward() or reset().
    const std::vector<std::vector<double>>& backward(int scalar_node);

  private:
    enum class OpKind : std::uint8_t {
        Constant, Affine, Unary, Add, Sub, Mul, OneMinus, Scale, Concat, Slice, CholCov, GaussNll
    };

    struct Node {
        OpKind kind;
        UnaryKind unary;
        int a = -1, b = -1;
        int store = -1, w_block = -1, b_block = -1;
        int args_off = 0, args_len = 0;
        int slice_off = 0;
        double scalar = 0.0;
        double tx = 0.0, ty = 0.0;
        std::size_t off = 0;
        int len = 0;
    };

    int push(Node n, int len);
    int binary(OpKind kind, int a, int b, const char* what);
    const double* vals(const Node& n) const { return vals_.data() + n.off; }
    double* vals(const Node& n) { return vals_.data() + n.off; }
    double* grads(const Node& n) { return grads_.data() + n.off; }
    const Node& node_checked(int id, const char* what) const;

    std::vector<const ParamStore*> stores_;
    std::vector<Node> nodes_;
    std::vector<double> vals_;
    std::vector<double> grads_;
    std::vector<int> concat_args_;
    std::vector<std::vector<double>> param_grads_;
};

}  // namespace pucycle
