#include "sentinel/tensor.hpp"

#include <sstream>
#include <unordered_set>

namespace sentinel {

std::int64_t shape_numel(const Shape& shape) {
    std::int64_t n = 1;
    for (std::int64_t d : shape) n *= d;
    return n;
}

std::string shape_str(const Shape& shape) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ",";
        os << shape[i];
    }
    os << ")";
    return os.str();
}

std::vector<std::int64_t> row_major_strides(const Shape& shape) {
    std::vector<std::int64_t> strides(shape.size(), 1);
    for (std::int64_t i = static_cast<std::int64_t>(shape.size()) - 2; i >= 0; --i)
        strides[i] = strides[i + 1] * shape[i + 1];
    return strides;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
    return full(std::move(shape), scalar(0), requires_grad);
}

Tensor Tensor::full(Shape shape, scalar value, bool requires_grad) {
    for (std::int64_t d : shape)
        if (d <= 0) throw std::invalid_argument("tensor dimensions must be positive, got " + shape_str(shape));
    auto node = std::make_shared<detail::Node>();
    node->data.assign(static_cast<std::size_t>(shape_numel(shape)), value);
    node->shape = std::move(shape);
    node->requires_grad = requires_grad;
    return Tensor(std::move(node));
}

Tensor Tensor::from_data(Shape shape, std::vector<scalar> data, bool requires_grad) {
    if (shape_numel(shape) != static_cast<std::int64_t>(data.size()))
        throw std::invalid_argument("data length " + std::to_string(data.size()) +
                                    " does not match shape " + shape_str(shape));
    auto node = std::make_shared<detail::Node>();
    node->shape = std::move(shape);
    node->data = std::move(data);
    node->requires_grad = requires_grad;
    return Tensor(std::move(node));
}

Tensor Tensor::scalar_value(scalar value, bool requires_grad) {
    return from_data(Shape{}, {value}, requires_grad);
}

std::int64_t Tensor::size(std::int64_t axis) const {
    if (axis < 0 || axis >= ndim())
        throw std::invalid_argument("axis " + std::to_string(axis) + " out of range for shape " + shape_str(shape()));
    return node_->shape[static_cast<std::size_t>(axis)];
}

std::vector<scalar>& Tensor::grad() {
    if (!has_grad()) throw std::runtime_error("tensor has no gradient; call backward() first");
    return node_->grad;
}

const std::vector<scalar>& Tensor::grad() const {
    if (!has_grad()) throw std::runtime_error("tensor has no gradient; call backward() first");
    return node_->grad;
}

void Tensor::zero_grad() {
    node_->grad.assign(node_->data.size(), scalar(0));
}

scalar Tensor::at(std::initializer_list<std::int64_t> idx) const {
    if (static_cast<std::int64_t>(idx.size()) != ndim())
        throw std::invalid_argument("index rank does not match tensor rank");
    auto strides = row_major_strides(shape());
    std::int64_t off = 0;
    std::size_t d = 0;
    for (std::int64_t i : idx) {
        if (i < 0 || i >= shape()[d]) throw std::out_of_range("tensor index out of range");
        off += i * strides[d];
        ++d;
    }
    return node_->data[static_cast<std::size_t>(off)];
}

scalar Tensor::item() const {
    if (numel() != 1) throw std::invalid_argument("item() requires a single-element tensor, got " + shape_str(shape()));
    return node_->data[0];
}

Tensor Tensor::detach_copy() const {
    return from_data(shape(), data(), false);
}

void Tensor::backward() const {
    if (!defined()) throw std::runtime_error("backward() on undefined tensor");
    if (numel() != 1)
        throw std::invalid_argument("backward() requires a scalar loss, got shape " + shape_str(shape()));

    // Iterative post-order DFS over parents.
    std::vector<detail::Node*> topo;
    std::unordered_set<detail::Node*> visited;
    struct Frame {
        detail::Node* node;
        std::size_t next_parent;
    };
    std::vector<Frame> stack;
    stack.push_back({node_.get(), 0});
    visited.insert(node_.get());
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_parent < f.node->parents.size()) {
            detail::Node* p = f.node->parents[f.next_parent++].get();
            if (visited.insert(p).second) stack.push_back({p, 0});
        } else {
            topo.push_back(f.node);
            stack.pop_back();
        }
    }

    node_->ensure_grad();
    node_->grad[0] += scalar(1);
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        detail::Node* n = *it;
        if (n->backward_fn && n->grad.size() == n->data.size()) n->backward_fn(*n);
    }
}

Tensor make_op(Shape shape, std::vector<scalar> data, const std::vector<Tensor>& inputs,
               std::function<void(detail::Node&)> backward_fn) {
    Tensor out = Tensor::from_data(std::move(shape), std::move(data), false);
    bool track = false;
    for (const auto& t : inputs)
        if (t.defined() && t.requires_grad()) track = true;
    if (track) {
        out.set_requires_grad(true);
        auto node = out.node();
        node->parents.reserve(inputs.size());
        for (const auto& t : inputs)
            if (t.defined()) node->parents.push_back(t.node());
        node->backward_fn = std::move(backward_fn);
    }
    return out;
}

} // namespace sentinel
