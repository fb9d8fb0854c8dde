#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "indicmt/rng.hpp"

namespace indicmt::ad {

using Matrix = Eigen::MatrixXd;

// A named trainable array. Gradients accumulate across backward passes
// until zero_grad, which is what gradient accumulation relies on.
struct Parameter {
    std::string name;
    Matrix value;
    Matrix grad;

    Parameter() = default;
    Parameter(std::string n, Matrix v)
        : name(std::move(n)), value(std::move(v)),
          grad(Matrix::Zero(value.rows(), value.cols())) {}

    void zero_grad() { grad.setZero(); }
};

struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

// Per-head attention geometry. Rows of Q are grouped per batch element
// ((batch * q_len) x d_model); the head split happens inside the op.
struct AttentionSpec {
    int num_heads = 1;
    int batch = 1;
    int q_len = 0;
    int k_len = 0;
    bool causal = false;
    // Valid key count per batch element; keys at index >= length are
    // masked. Empty means every key is valid.
    std::vector<int> key_lengths;
};

// Reverse-mode tape over dense matrices. A tape lives for one forward/
// backward pass; parameters persist outside and collect their gradients
// when backward() finishes.
class Tape {
public:
    Var constant(Matrix value);
    Var param(Parameter& p);

    const Matrix& value(Var v) const { return nodes_[v.id].value; }
    const Matrix& grad(Var v) const { return nodes_[v.id].grad; }

    Var add(Var a, Var b);
    Var add_rowvec(Var a, Var bias);       // bias broadcast over rows
    Var matmul(Var a, Var b);
    Var scale(Var a, double c);
    Var relu(Var a);
    Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
    Var dropout(Var a, double p, Rng& rng, bool enabled);
    Var embedding(const std::vector<int>& ids, Parameter& table, double scale);
    Var attention(Var q, Var k, Var v, AttentionSpec spec);
    Var log_softmax_rows(Var a);

    // Mean label-smoothed negative log-likelihood over rows where
    // active != 0. Returns a 1x1 node.
    Var nll_label_smoothed(Var log_probs, std::vector<int> targets, double eps,
                           std::vector<unsigned char> active);

    void backward(Var loss);

    std::size_t size() const { return nodes_.size(); }

private:
    // The closure receives the node's own index so it can read its output
    // gradient; indices stay valid across vector growth, references do not.
    using BackFn = std::function<void(Tape&, int self)>;

    struct Node {
        Matrix value;
        Matrix grad;
        BackFn back; // empty for leaves
    };

    Var make(Matrix value, BackFn back = {});
    Matrix& grad_mut(int id) { return nodes_[id].grad; }
    const Matrix& val(int id) const { return nodes_[id].value; }

    std::vector<Node> nodes_;
    std::vector<std::pair<int, Parameter*>> param_nodes_;
};

} // namespace indicmt::ad
