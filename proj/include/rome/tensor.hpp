#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rome/errors.hpp"

namespace rome {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);

// Plain parameter storage that outlives any single tape.
struct Value {
    Shape shape;
    std::vector<double> data;

    Value() = default;
    Value(Shape s, std::vector<double> d);
    static Value zeros(Shape s);
    static Value scalar(double v);
    std::size_t size() const { return data.size(); }
};

class Graph;

// Lightweight handle into a Graph's tape. Valid only while the Graph lives.
class Tensor {
 public:
    Tensor() = default;

    const Shape& shape() const;
    const std::vector<double>& value() const;
    double scalar() const;
    // Gradient accumulated by the last Graph::backward call. Zero-filled for
    // leaves not on any path to the loss.
    const std::vector<double>& grad() const;
    bool requires_grad() const;
    std::size_t id() const { return idx_; }
    Graph* graph() const { return graph_; }
    bool defined() const { return graph_ != nullptr; }

 private:
    friend class Graph;
    Tensor(Graph* g, std::size_t idx) : graph_(g), idx_(idx) {}

    Graph* graph_ = nullptr;
    std::size_t idx_ = 0;
};

// Dynamic tape: every primitive appends one node; backward replays the tape
// in exact reverse insertion order. Rebuilt from scratch every forward pass.
class Graph {
 public:
    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    Tensor leaf(Shape shape, std::vector<double> data, bool requires_grad);
    Tensor leaf(const Value& v, bool requires_grad);
    Tensor constant(Shape shape, std::vector<double> data);
    Tensor scalar_constant(double v);

    Tensor matmul(Tensor a, Tensor b);

    Tensor add(Tensor a, Tensor b);
    Tensor sub(Tensor a, Tensor b);
    Tensor mul(Tensor a, Tensor b);
    Tensor div(Tensor a, Tensor b);

    Tensor relu(Tensor a);
    Tensor exp(Tensor a);
    Tensor log(Tensor a);
    Tensor neg(Tensor a);
    Tensor scale(Tensor a, double c);

    // 1-D stable softmax with temperature: softmax(a / temperature).
    Tensor softmax(Tensor a, double temperature = 1.0);
    // 1-D stable log softmax.
    Tensor log_softmax(Tensor a);

    // Mean negative log likelihood; logits is batch x classes.
    Tensor cross_entropy(Tensor logits, const std::vector<int>& labels);

    Tensor sum(Tensor a);
    // Rank-0 view of a[i], differentiable.
    Tensor element(Tensor a, std::size_t i);
    // Broadcast a rank-0 scalar across x (elementwise product).
    Tensor mul_scalar(Tensor x, Tensor s);
    // Materialize a rank-0 scalar at an arbitrary shape.
    Tensor expand(Tensor s, Shape shape);
    // x is m x n, row is a length-n vector added to every row.
    Tensor add_rowvec(Tensor x, Tensor row);
    // Column-wise concatenation of m x n_i matrices.
    Tensor concat_cols(const std::vector<Tensor>& parts);

    // Forward identity, backward zero.
    Tensor stop_gradient(Tensor a);

    // loss must be rank-0. Populates grad() for every node, visiting the
    // tape in reverse insertion order. Deterministic.
    void backward(Tensor loss);

    std::size_t num_nodes() const { return nodes_.size(); }

 private:
    struct Node {
        Shape shape;
        std::vector<double> value;
        std::vector<double> grad;
        bool requires_grad = false;
        std::function<void()> backward_fn;  // accumulates into input grads
    };

    Tensor make(Shape shape, std::vector<double> data, bool requires_grad,
                std::function<void()> backward_fn, const char* op_name);
    Node& node(Tensor t);
    const Node& node(Tensor t) const;
    void check_same_graph(Tensor t) const;

    std::vector<Node> nodes_;

    friend class Tensor;
};

}  // namespace rome
