#include "rome/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rome {

namespace {

void check_all_finite(const std::vector<double>& data, const char* op_name) {
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string(op_name) + ": produced non-finite value");
        }
    }
}

std::string shape_str(const Shape& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += "x";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

}  // namespace

std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

Value::Value(Shape s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
    if (shape_numel(shape) != data.size()) {
        throw DimensionError("Value: shape " + shape_str(shape) + " does not match data length " +
                             std::to_string(data.size()));
    }
}

Value Value::zeros(Shape s) {
    std::size_t n = shape_numel(s);
    return Value(std::move(s), std::vector<double>(n, 0.0));
}

Value Value::scalar(double v) { return Value({}, {v}); }

const Shape& Tensor::shape() const { return graph_->node(*this).shape; }
const std::vector<double>& Tensor::value() const { return graph_->node(*this).value; }
const std::vector<double>& Tensor::grad() const { return graph_->node(*this).grad; }
bool Tensor::requires_grad() const { return graph_->node(*this).requires_grad; }

double Tensor::scalar() const {
    const auto& n = graph_->node(*this);
    if (n.value.size() != 1) {
        throw ContractError("Tensor::scalar: tensor has " + std::to_string(n.value.size()) +
                            " elements");
    }
    return n.value[0];
}

Graph::Node& Graph::node(Tensor t) { return nodes_.at(t.idx_); }
const Graph::Node& Graph::node(Tensor t) const { return nodes_.at(t.idx_); }

void Graph::check_same_graph(Tensor t) const {
    if (t.graph_ != this) {
        throw ContractError("tensor belongs to a different graph");
    }
}

Tensor Graph::make(Shape shape, std::vector<double> data, bool requires_grad,
                   std::function<void()> backward_fn, const char* op_name) {
    if (shape_numel(shape) != data.size()) {
        throw DimensionError(std::string(op_name) + ": shape/data length mismatch");
    }
    check_all_finite(data, op_name);
    Node n;
    n.shape = std::move(shape);
    n.value = std::move(data);
    n.grad.assign(n.value.size(), 0.0);
    n.requires_grad = requires_grad;
    n.backward_fn = std::move(backward_fn);
    nodes_.push_back(std::move(n));
    return Tensor(this, nodes_.size() - 1);
}

Tensor Graph::leaf(Shape shape, std::vector<double> data, bool requires_grad) {
    return make(std::move(shape), std::move(data), requires_grad, nullptr, "leaf");
}

Tensor Graph::leaf(const Value& v, bool requires_grad) {
    return make(v.shape, v.data, requires_grad, nullptr, "leaf");
}

Tensor Graph::constant(Shape shape, std::vector<double> data) {
    return make(std::move(shape), std::move(data), false, nullptr, "constant");
}

Tensor Graph::scalar_constant(double v) { return constant({}, {v}); }

Tensor Graph::matmul(Tensor a, Tensor b) {
    check_same_graph(a);
    check_same_graph(b);
    const Node& na = node(a);
    const Node& nb = node(b);
    if (na.shape.size() != 2 || nb.shape.size() != 2 || na.shape[1] != nb.shape[0]) {
        throw DimensionError("matmul: incompatible shapes " + shape_str(na.shape) + " and " +
                             shape_str(nb.shape));
    }
    const std::size_t m = na.shape[0], k = na.shape[1], n = nb.shape[1];
    std::vector<double> out(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double av = na.value[i * k + p];
            for (std::size_t j = 0; j < n; ++j) {
                out[i * n + j] += av * nb.value[p * n + j];
            }
        }
    }
    bool rg = na.requires_grad || nb.requires_grad;
    std::size_t ia = a.idx_, ib = b.idx_;
    auto* g = this;
    std::size_t out_idx = nodes_.size();
    auto bw = [g, ia, ib, m, k, n, out_idx]() {
        const auto& go = g->nodes_[out_idx].grad;
        auto& A = g->nodes_[ia];
        auto& B = g->nodes_[ib];
        if (A.requires_grad) {
            // dA = dC * B^T
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t p = 0; p < k; ++p) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n; ++j)
                        acc += go[i * n + j] * B.value[p * n + j];
                    A.grad[i * k + p] += acc;
                }
        }
        if (B.requires_grad) {
            // dB = A^T * dC
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < m; ++i)
                        acc += A.value[i * k + p] * go[i * n + j];
                    B.grad[p * n + j] += acc;
                }
        }
    };
    return make({m, n}, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "matmul");
}

Tensor Graph::add(Tensor a, Tensor b) {
    check_same_graph(a);
    check_same_graph(b);
    const Node& na = node(a);
    const Node& nb = node(b);
    if (na.shape != nb.shape) throw DimensionError("add: shape mismatch");
    std::vector<double> out(na.value.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = na.value[i] + nb.value[i];
    bool rg = na.requires_grad || nb.requires_grad;
    std::size_t ia = a.idx_, ib = b.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, ib, oi]() {
        const auto& go = g->nodes_[oi].grad;
        auto& A = g->nodes_[ia];
        auto& B = g->nodes_[ib];
        if (A.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i) A.grad[i] += go[i];
        if (B.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i) B.grad[i] += go[i];
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "add");
}

Tensor Graph::sub(Tensor a, Tensor b) {
    check_same_graph(a);
    check_same_graph(b);
    const Node& na = node(a);
    const Node& nb = node(b);
    if (na.shape != nb.shape) throw DimensionError("sub: shape mismatch");
    std::vector<double> out(na.value.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = na.value[i] - nb.value[i];
    bool rg = na.requires_grad || nb.requires_grad;
    std::size_t ia = a.idx_, ib = b.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, ib, oi]() {
        const auto& go = g->nodes_[oi].grad;
        auto& A = g->nodes_[ia];
        auto& B = g->nodes_[ib];
        if (A.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i) A.grad[i] += go[i];
        if (B.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i) B.grad[i] -= go[i];
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "sub");
}

Tensor Graph::mul(Tensor a, Tensor b) {
    check_same_graph(a);
    check_same_graph(b);
    const Node& na = node(a);
    const Node& nb = node(b);
    if (na.shape != nb.shape) throw DimensionError("mul: shape mismatch");
    std::vector<double> out(na.value.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = na.value[i] * nb.value[i];
    bool rg = na.requires_grad || nb.requires_grad;
    std::size_t ia = a.idx_, ib = b.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, ib, oi]() {
        const auto& go = g->nodes_[oi].grad;
        auto& A = g->nodes_[ia];
        auto& B = g->nodes_[ib];
        if (A.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i) A.grad[i] += go[i] * B.value[i];
        if (B.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i) B.grad[i] += go[i] * A.value[i];
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "mul");
}

Tensor Graph::div(Tensor a, Tensor b) {
    check_same_graph(a);
    check_same_graph(b);
    const Node& na = node(a);
    const Node& nb = node(b);
    if (na.shape != nb.shape) throw DimensionError("div: shape mismatch");
    std::vector<double> out(na.value.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (std::abs(nb.value[i]) < 1e-300) {
            throw NumericError("div: divisor magnitude below 1e-300");
        }
        out[i] = na.value[i] / nb.value[i];
    }
    bool rg = na.requires_grad || nb.requires_grad;
    std::size_t ia = a.idx_, ib = b.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, ib, oi]() {
        const auto& go = g->nodes_[oi].grad;
        auto& A = g->nodes_[ia];
        auto& B = g->nodes_[ib];
        if (A.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i) A.grad[i] += go[i] / B.value[i];
        if (B.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i)
                B.grad[i] -= go[i] * A.value[i] / (B.value[i] * B.value[i]);
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "div");
}

Tensor Graph::relu(Tensor a) {
    check_same_graph(a);
    const Node& na = node(a);
    std::vector<double> out(na.value.size());
    // relu'(0) := 0
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = na.value[i] > 0.0 ? na.value[i] : 0.0;
    bool rg = na.requires_grad;
    std::size_t ia = a.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, oi]() {
        const auto& go = g->nodes_[oi].grad;
        auto& A = g->nodes_[ia];
        for (std::size_t i = 0; i < go.size(); ++i)
            if (A.value[i] > 0.0) A.grad[i] += go[i];
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "relu");
}

Tensor Graph::exp(Tensor a) {
    check_same_graph(a);
    const Node& na = node(a);
    std::vector<double> out(na.value.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(na.value[i]);
    bool rg = na.requires_grad;
    std::size_t ia = a.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, oi]() {
        const auto& o = g->nodes_[oi];
        auto& A = g->nodes_[ia];
        for (std::size_t i = 0; i < o.grad.size(); ++i) A.grad[i] += o.grad[i] * o.value[i];
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "exp");
}

Tensor Graph::log(Tensor a) {
    check_same_graph(a);
    const Node& na = node(a);
    std::vector<double> out(na.value.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(na.value[i] > 0.0)) throw NumericError("log: nonpositive input");
        out[i] = std::log(na.value[i]);
    }
    bool rg = na.requires_grad;
    std::size_t ia = a.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, oi]() {
        const auto& go = g->nodes_[oi].grad;
        auto& A = g->nodes_[ia];
        for (std::size_t i = 0; i < go.size(); ++i) A.grad[i] += go[i] / A.value[i];
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "log");
}

Tensor Graph::neg(Tensor a) { return scale(a, -1.0); }

Tensor Graph::scale(Tensor a, double c) {
    check_same_graph(a);
    const Node& na = node(a);
    std::vector<double> out(na.value.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * na.value[i];
    bool rg = na.requires_grad;
    std::size_t ia = a.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, oi, c]() {
        const auto& go = g->nodes_[oi].grad;
        auto& A = g->nodes_[ia];
        for (std::size_t i = 0; i < go.size(); ++i) A.grad[i] += c * go[i];
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "scale");
}

Tensor Graph::softmax(Tensor a, double temperature) {
    check_same_graph(a);
    if (!(temperature > 0.0)) throw ContractError("softmax: temperature must be positive");
    const Node& na = node(a);
    if (na.shape.size() != 1 || na.shape[0] < 1) {
        throw DimensionError("softmax: expects a rank-1 tensor of length >= 1");
    }
    const std::size_t n = na.value.size();
    std::vector<double> out(n);
    double mx = *std::max_element(na.value.begin(), na.value.end());
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp((na.value[i] - mx) / temperature);
        denom += out[i];
    }
    for (std::size_t i = 0; i < n; ++i) out[i] /= denom;
    bool rg = na.requires_grad;
    std::size_t ia = a.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, oi, n, temperature]() {
        const auto& o = g->nodes_[oi];
        auto& A = g->nodes_[ia];
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += o.grad[j] * o.value[j];
        for (std::size_t i = 0; i < n; ++i)
            A.grad[i] += o.value[i] * (o.grad[i] - dot) / temperature;
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr, "softmax");
}

Tensor Graph::log_softmax(Tensor a) {
    check_same_graph(a);
    const Node& na = node(a);
    if (na.shape.size() != 1 || na.shape[0] < 1) {
        throw DimensionError("log_softmax: expects a rank-1 tensor of length >= 1");
    }
    const std::size_t n = na.value.size();
    double mx = *std::max_element(na.value.begin(), na.value.end());
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i) denom += std::exp(na.value[i] - mx);
    const double lse = mx + std::log(denom);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = na.value[i] - lse;
    bool rg = na.requires_grad;
    std::size_t ia = a.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, oi, n]() {
        const auto& o = g->nodes_[oi];
        auto& A = g->nodes_[ia];
        double gsum = 0.0;
        for (std::size_t j = 0; j < n; ++j) gsum += o.grad[j];
        for (std::size_t i = 0; i < n; ++i)
            A.grad[i] += o.grad[i] - std::exp(o.value[i]) * gsum;
    };
    return make(na.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr,
                "log_softmax");
}

Tensor Graph::cross_entropy(Tensor logits, const std::vector<int>& labels) {
    check_same_graph(logits);
    const Node& nl = node(logits);
    if (nl.shape.size() != 2) throw DimensionError("cross_entropy: logits must be batch x classes");
    const std::size_t batch = nl.shape[0], classes = nl.shape[1];
    if (labels.size() != batch) throw DimensionError("cross_entropy: label count != batch");
    for (int lbl : labels) {
        if (lbl < 0 || static_cast<std::size_t>(lbl) >= classes) {
            throw ContractError("cross_entropy: label out of range");
        }
    }
    double loss = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        const double* row = nl.value.data() + b * classes;
        double mx = *std::max_element(row, row + classes);
        double denom = 0.0;
        for (std::size_t c = 0; c < classes; ++c) denom += std::exp(row[c] - mx);
        loss += (mx + std::log(denom)) - row[labels[b]];
    }
    loss /= static_cast<double>(batch);
    bool rg = nl.requires_grad;
    std::size_t il = logits.idx_, oi = nodes_.size();
    auto* g = this;
    std::vector<int> labels_copy = labels;
    auto bw = [g, il, oi, batch, classes, labels_copy]() {
        const double go = g->nodes_[oi].grad[0];
        auto& L = g->nodes_[il];
        for (std::size_t b = 0; b < batch; ++b) {
            const double* row = L.value.data() + b * classes;
            double mx = *std::max_element(row, row + classes);
            double denom = 0.0;
            for (std::size_t c = 0; c < classes; ++c) denom += std::exp(row[c] - mx);
            for (std::size_t c = 0; c < classes; ++c) {
                double p = std::exp(row[c] - mx) / denom;
                double onehot = (static_cast<std::size_t>(labels_copy[b]) == c) ? 1.0 : 0.0;
                L.grad[b * classes + c] += go * (p - onehot) / static_cast<double>(batch);
            }
        }
    };
    return make({}, {loss}, rg, rg ? std::function<void()>(bw) : nullptr, "cross_entropy");
}

Tensor Graph::sum(Tensor a) {
    check_same_graph(a);
    const Node& na = node(a);
    double s = std::accumulate(na.value.begin(), na.value.end(), 0.0);
    bool rg = na.requires_grad;
    std::size_t ia = a.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, oi]() {
        const double go = g->nodes_[oi].grad[0];
        auto& A = g->nodes_[ia];
        for (double& v : A.grad) v += go;
    };
    return make({}, {s}, rg, rg ? std::function<void()>(bw) : nullptr, "sum");
}

Tensor Graph::element(Tensor a, std::size_t i) {
    check_same_graph(a);
    const Node& na = node(a);
    if (i >= na.value.size()) throw ContractError("element: index out of range");
    bool rg = na.requires_grad;
    std::size_t ia = a.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ia, oi, i]() { g->nodes_[ia].grad[i] += g->nodes_[oi].grad[0]; };
    return make({}, {na.value[i]}, rg, rg ? std::function<void()>(bw) : nullptr, "element");
}

Tensor Graph::mul_scalar(Tensor x, Tensor s) {
    check_same_graph(x);
    check_same_graph(s);
    const Node& nx = node(x);
    const Node& ns = node(s);
    if (ns.value.size() != 1) throw DimensionError("mul_scalar: s must be rank-0");
    const double sv = ns.value[0];
    std::vector<double> out(nx.value.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = nx.value[i] * sv;
    bool rg = nx.requires_grad || ns.requires_grad;
    std::size_t ix = x.idx_, is = s.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ix, is, oi]() {
        const auto& go = g->nodes_[oi].grad;
        auto& X = g->nodes_[ix];
        auto& S = g->nodes_[is];
        if (X.requires_grad) {
            const double sv = S.value[0];
            for (std::size_t i = 0; i < go.size(); ++i) X.grad[i] += go[i] * sv;
        }
        if (S.requires_grad) {
            double acc = 0.0;
            for (std::size_t i = 0; i < go.size(); ++i) acc += go[i] * X.value[i];
            S.grad[0] += acc;
        }
    };
    return make(nx.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr,
                "mul_scalar");
}

Tensor Graph::expand(Tensor s, Shape shape) {
    check_same_graph(s);
    const Node& ns = node(s);
    if (ns.value.size() != 1) throw DimensionError("expand: source must be rank-0");
    std::size_t n = shape_numel(shape);
    std::vector<double> out(n, ns.value[0]);
    bool rg = ns.requires_grad;
    std::size_t is = s.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, is, oi]() {
        const auto& go = g->nodes_[oi].grad;
        double acc = std::accumulate(go.begin(), go.end(), 0.0);
        g->nodes_[is].grad[0] += acc;
    };
    return make(std::move(shape), std::move(out), rg, rg ? std::function<void()>(bw) : nullptr,
                "expand");
}

Tensor Graph::add_rowvec(Tensor x, Tensor row) {
    check_same_graph(x);
    check_same_graph(row);
    const Node& nx = node(x);
    const Node& nr = node(row);
    if (nx.shape.size() != 2 || nr.shape.size() != 1 || nr.shape[0] != nx.shape[1]) {
        throw DimensionError("add_rowvec: x must be m x n and row length n");
    }
    const std::size_t m = nx.shape[0], n = nx.shape[1];
    std::vector<double> out(nx.value.size());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = nx.value[i * n + j] + nr.value[j];
    bool rg = nx.requires_grad || nr.requires_grad;
    std::size_t ix = x.idx_, ir = row.idx_, oi = nodes_.size();
    auto* g = this;
    auto bw = [g, ix, ir, oi, m, n]() {
        const auto& go = g->nodes_[oi].grad;
        auto& X = g->nodes_[ix];
        auto& R = g->nodes_[ir];
        if (X.requires_grad)
            for (std::size_t i = 0; i < go.size(); ++i) X.grad[i] += go[i];
        if (R.requires_grad)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) R.grad[j] += go[i * n + j];
    };
    return make(nx.shape, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr,
                "add_rowvec");
}

Tensor Graph::concat_cols(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw ContractError("concat_cols: no inputs");
    std::size_t m = 0, total = 0;
    bool rg = false;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        check_same_graph(parts[p]);
        const Node& np = node(parts[p]);
        if (np.shape.size() != 2) throw DimensionError("concat_cols: inputs must be rank-2");
        if (p == 0) m = np.shape[0];
        if (np.shape[0] != m) throw DimensionError("concat_cols: row count mismatch");
        total += np.shape[1];
        rg = rg || np.requires_grad;
    }
    std::vector<double> out(m * total);
    std::size_t col = 0;
    std::vector<std::size_t> idxs, widths, offsets;
    for (const Tensor& t : parts) {
        const Node& np = node(t);
        std::size_t w = np.shape[1];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < w; ++j) out[i * total + col + j] = np.value[i * w + j];
        idxs.push_back(t.idx_);
        widths.push_back(w);
        offsets.push_back(col);
        col += w;
    }
    std::size_t oi = nodes_.size();
    auto* g = this;
    auto bw = [g, idxs, widths, offsets, oi, m, total]() {
        const auto& go = g->nodes_[oi].grad;
        for (std::size_t p = 0; p < idxs.size(); ++p) {
            auto& P = g->nodes_[idxs[p]];
            if (!P.requires_grad) continue;
            std::size_t w = widths[p], off = offsets[p];
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < w; ++j)
                    P.grad[i * w + j] += go[i * total + off + j];
        }
    };
    return make({m, total}, std::move(out), rg, rg ? std::function<void()>(bw) : nullptr,
                "concat_cols");
}

Tensor Graph::stop_gradient(Tensor a) {
    check_same_graph(a);
    const Node& na = node(a);
    return make(na.shape, na.value, false, nullptr, "stop_gradient");
}

void Graph::backward(Tensor loss) {
    check_same_graph(loss);
    if (node(loss).value.size() != 1) {
        throw ContractError("backward: loss must be a scalar");
    }
    for (Node& n : nodes_) std::fill(n.grad.begin(), n.grad.end(), 0.0);
    node(loss).grad[0] = 1.0;
    for (std::size_t i = loss.idx_ + 1; i-- > 0;) {
        Node& n = nodes_[i];
        if (n.requires_grad && n.backward_fn) n.backward_fn();
    }
}

}  // namespace rome
