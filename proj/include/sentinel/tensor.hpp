#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sentinel {

#ifdef SENTINEL_SINGLE_PRECISION
using scalar = float;
#else
using scalar = double;
#endif

using Shape = std::vector<std::int64_t>;

std::int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);
std::vector<std::int64_t> row_major_strides(const Shape& shape);

namespace detail {

// One node of the autodiff graph. Ops capture parent nodes in their
// backward closure; backward() walks nodes in reverse topological order.
struct Node {
    Shape shape;
    std::vector<scalar> data;
    bool requires_grad = false;
    std::vector<scalar> grad;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backward_fn;

    std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }

    std::vector<scalar>& ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), scalar(0));
        return grad;
    }
};

using NodePtr = std::shared_ptr<Node>;

} // namespace detail

// Value-semantics handle to a graph node. Copies share the node, so a
// parameter tensor held by a model and by an optimizer is the same storage.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, scalar value, bool requires_grad = false);
    static Tensor from_data(Shape shape, std::vector<scalar> data, bool requires_grad = false);
    static Tensor scalar_value(scalar value, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const { return node_->shape; }
    std::int64_t ndim() const { return static_cast<std::int64_t>(node_->shape.size()); }
    std::int64_t numel() const { return node_->numel(); }
    std::int64_t size(std::int64_t axis) const;

    std::vector<scalar>& data() { return node_->data; }
    const std::vector<scalar>& data() const { return node_->data; }

    bool requires_grad() const { return node_->requires_grad; }
    void set_requires_grad(bool value) { node_->requires_grad = value; }

    bool has_grad() const { return node_->grad.size() == node_->data.size(); }
    std::vector<scalar>& grad();
    const std::vector<scalar>& grad() const;
    void zero_grad();

    // Value lookup by multi-index; for tests and small-scale inspection.
    scalar at(std::initializer_list<std::int64_t> idx) const;
    scalar item() const;

    // Reverse-mode sweep from a scalar. Gradients accumulate additively
    // into every reachable requires_grad node.
    void backward() const;

    // Deep copy of values only (no graph edges, no grad).
    Tensor detach_copy() const;

    detail::NodePtr node() const { return node_; }
    explicit Tensor(detail::NodePtr node) : node_(std::move(node)) {}

private:
    detail::NodePtr node_;
};

// Builds an op output: requires_grad is inherited from inputs, and the
// backward closure is attached only when some input is tracked.
Tensor make_op(Shape shape, std::vector<scalar> data, const std::vector<Tensor>& inputs,
               std::function<void(detail::Node&)> backward_fn);

} // namespace sentinel
