#include "pucycle/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace pucycle {

namespace {

double dot(const double* w, const double* x, int n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += w[i] * x[i];
        s1 += w[i + 1] * x[i + 1];
        s2 += w[i + 2] * x[i + 2];
        s3 += w[i + 3] * x[i + 3];
    }
    for (; i < n; ++i) s0 += w[i] * x[i];
    return (s0 + s1) + (s2 + s3);
}

void axpy(double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

Tape::Tape(std::vector<const ParamStore*> stores) : stores_(std::move(stores)) {
    param_grads_.resize(stores_.size());
}

void Tape::reset() {
    nodes_.clear();
    vals_.clear();
    grads_.clear();
    concat_args_.clear();
}

int Tape::push(Node n, int len) {
    n.off = vals_.size();
    n.len = len;
    vals_.resize(vals_.size() + static_cast<std::size_t>(len));
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
}

const Tape::Node& Tape::node_checked(int id, const char* what) const {
    if (id < 0 || id >= static_cast<int>(nodes_.size())) {
        throw std::invalid_argument(std::string(what) + ": node id not on this tape");
    }
    return nodes_[static_cast<std::size_t>(id)];
}

int Tape::constant(std::span<const double> v) {
    Node n{};
    n.kind = OpKind::Constant;
    const int id = push(n, static_cast<int>(v.size()));
    double* out = vals(nodes_.back());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return id;
}

int Tape::constant(std::initializer_list<double> v) {
    return constant(std::span<const double>(v.begin(), v.size()));
}

int Tape::zeros(int n) {
    Node nd{};
    nd.kind = OpKind::Constant;
    return push(nd, n);  // arena is value-initialized by resize
}

int Tape::affine(int store, int w_block, int b_block, int x) {
    const Node& xs = node_checked(x, "affine");
    if (store < 0 || store >= static_cast<int>(stores_.size())) {
        throw std::invalid_argument("affine: bad store index");
    }
    const ParamStore& ps = *stores_[static_cast<std::size_t>(store)];
    const ParamBlock& wb = ps.block(w_block);
    const ParamBlock& bb = ps.block(b_block);
    if (wb.shape.size() != 2) throw std::invalid_argument("affine: weight block must be 2-D");
    const int rows = wb.shape[0], cols = wb.shape[1];
    if (cols != xs.len) throw std::invalid_argument("affine: input length mismatch");
    if (bb.size != static_cast<std::size_t>(rows)) throw std::invalid_argument("affine: bias length mismatch");
    const std::size_t x_off = xs.off;  // push() may reallocate nodes_

    Node n{};
    n.kind = OpKind::Affine;
    n.a = x;
    n.store = store;
    n.w_block = w_block;
    n.b_block = b_block;
    const int id = push(n, rows);
    const double* w = ps.flat().data() + wb.offset;
    const double* b = ps.flat().data() + bb.offset;
    const double* xv = vals_.data() + x_off;
    double* out = vals(nodes_.back());
    for (int r = 0; r < rows; ++r) {
        out[r] = b[r] + dot(w + static_cast<std::size_t>(r) * cols, xv, cols);
    }
    return id;
}

int Tape::unary(UnaryKind kind, int x) {
    const Node& xs = node_checked(x, "unary");
    const std::size_t x_off = xs.off;
    const int len = xs.len;
    Node n{};
    n.kind = OpKind::Unary;
    n.unary = kind;
    n.a = x;
    const int id = push(n, len);
    const double* xv = vals_.data() + x_off;
    double* out = vals(nodes_.back());
    switch (kind) {
        case UnaryKind::Tanh:
            for (int i = 0; i < len; ++i) out[i] = std::tanh(xv[i]);
            break;
        case UnaryKind::Sigmoid:
            for (int i = 0; i < len; ++i) out[i] = sigmoid(xv[i]);
            break;
        case UnaryKind::Softplus:
            for (int i = 0; i < len; ++i) out[i] = softplus(xv[i]);
            break;
    }
    return id;
}

int Tape::binary(OpKind kind, int a, int b, const char* what) {
    const Node& as = node_checked(a, what);
    const Node& bs = node_checked(b, what);
    if (as.len != bs.len) throw std::invalid_argument(std::string(what) + ": length mismatch");
    const std::size_t a_off = as.off, b_off = bs.off;
    const int len = as.len;
    Node n{};
    n.kind = kind;
    n.a = a;
    n.b = b;
    const int id = push(n, len);
    const double* av = vals_.data() + a_off;
    const double* bv = vals_.data() + b_off;
    double* out = vals(nodes_.back());
    switch (kind) {
        case OpKind::Add:
            for (int i = 0; i < len; ++i) out[i] = av[i] + bv[i];
            break;
        case OpKind::Sub:
            for (int i = 0; i < len; ++i) out[i] = av[i] - bv[i];
            break;
        case OpKind::Mul:
            for (int i = 0; i < len; ++i) out[i] = av[i] * bv[i];
            break;
        default:
            throw std::logic_error("binary: not a binary op");
    }
    return id;
}

int Tape::add(int a, int b) { return binary(OpKind::Add, a, b, "add"); }
int Tape::sub(int a, int b) { return binary(OpKind::Sub, a, b, "sub"); }
int Tape::mul(int a, int b) { return binary(OpKind::Mul, a, b, "mul"); }

int Tape::one_minus(int a) {
    const Node& as = node_checked(a, "one_minus");
    const std::size_t a_off = as.off;
    const int len = as.len;
    Node n{};
    n.kind = OpKind::OneMinus;
    n.a = a;
    const int id = push(n, len);
    const double* av = vals_.data() + a_off;
    double* out = vals(nodes_.back());
    for (int i = 0; i < len; ++i) out[i] = 1.0 - av[i];
    return id;
}

int Tape::scale(int a, double c) {
    const Node& as = node_checked(a, "scale");
    const std::size_t a_off = as.off;
    const int len = as.len;
    Node n{};
    n.kind = OpKind::Scale;
    n.a = a;
    n.scalar = c;
    const int id = push(n, len);
    const double* av = vals_.data() + a_off;
    double* out = vals(nodes_.back());
    for (int i = 0; i < len; ++i) out[i] = c * av[i];
    return id;
}

int Tape::concat(std::span<const int> parts) {
    if (parts.empty()) throw std::invalid_argument("concat: no inputs");
    int total = 0;
    for (int p : parts) total += node_checked(p, "concat").len;
    Node n{};
    n.kind = OpKind::Concat;
    n.args_off = static_cast<int>(concat_args_.size());
    n.args_len = static_cast<int>(parts.size());
    concat_args_.insert(concat_args_.end(), parts.begin(), parts.end());
    const int id = push(n, total);
    double* out = vals(nodes_.back());
    for (int p : parts) {
        const Node& pn = nodes_[static_cast<std::size_t>(p)];
        const double* pv = vals_.data() + pn.off;
        for (int i = 0; i < pn.len; ++i) *out++ = pv[i];
    }
    return id;
}

int Tape::concat(std::initializer_list<int> parts) {
    return concat(std::span<const int>(parts.begin(), parts.size()));
}

int Tape::slice(int a, int offset, int len) {
    const Node& as = node_checked(a, "slice");
    if (offset < 0 || len <= 0 || offset + len > as.len) {
        throw std::invalid_argument("slice: range out of bounds");
    }
    Node n{};
    n.kind = OpKind::Slice;
    n.a = a;
    n.slice_off = offset;
    const int id = push(n, len);
    const double* av = vals_.data() + nodes_[static_cast<std::size_t>(a)].off;
    double* out = vals(nodes_.back());
    for (int i = 0; i < len; ++i) out[i] = av[offset + i];
    return id;
}

int Tape::chol_cov_entries(int raw) {
    const Node& rs = node_checked(raw, "chol_cov_entries");
    if (rs.len != 3) throw std::invalid_argument("chol_cov_entries: raw must have length 3");
    Node n{};
    n.kind = OpKind::CholCov;
    n.a = raw;
    const int id = push(n, 3);
    const double* rv = vals_.data() + nodes_[static_cast<std::size_t>(raw)].off;
    const double l00 = softplus(rv[0]);
    const double l11 = softplus(rv[1]);
    const double l10 = rv[2];
    double* out = vals(nodes_.back());
    out[0] = l00 * l00;
    out[1] = l00 * l10;
    out[2] = l10 * l10 + l11 * l11;
    return id;
}

int Tape::gaussian_nll(int mean, int raw, const Vec2& target) {
    const Node& ms = node_checked(mean, "gaussian_nll");
    const Node& rs = node_checked(raw, "gaussian_nll");
    if (ms.len != 2 || rs.len != 3) throw std::invalid_argument("gaussian_nll: mean/raw length mismatch");
    Node n{};
    n.kind = OpKind::GaussNll;
    n.a = mean;
    n.b = raw;
    n.tx = target.x;
    n.ty = target.y;
    const int id = push(n, 1);
    const double* mv = vals_.data() + nodes_[static_cast<std::size_t>(mean)].off;
    const double* rv = vals_.data() + nodes_[static_cast<std::size_t>(raw)].off;
    const double l00 = softplus(rv[0]);
    const double l11 = softplus(rv[1]);
    const double l10 = rv[2];
    const double d0 = target.x - mv[0];
    const double d1 = target.y - mv[1];
    const double u0 = d0 / l00;
    const double u1 = (d1 - l10 * u0) / l11;
    constexpr double log_two_pi = 1.8378770664093453;
    vals(nodes_.back())[0] = log_two_pi + std::log(l00) + std::log(l11) + 0.5 * (u0 * u0 + u1 * u1);
    return id;
}

std::span<const double> Tape::value(int id) const {
    const Node& n = node_checked(id, "value");
    return {vals_.data() + n.off, static_cast<std::size_t>(n.len)};
}

int Tape::length(int id) const { return node_checked(id, "length").len; }

const std::vector<std::vector<double>>& Tape::backward(int scalar_node) {
    const Node& out = node_checked(scalar_node, "backward");
    if (out.len != 1) throw std::invalid_argument("backward: output must be scalar");

    grads_.assign(vals_.size(), 0.0);
    for (std::size_t s = 0; s < stores_.size(); ++s) {
        param_grads_[s].assign(stores_[s]->size(), 0.0);
    }
    grads_[out.off] = 1.0;

    for (int id = scalar_node; id >= 0; --id) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        const double* g = grads(n);
        switch (n.kind) {
            case OpKind::Constant:
                break;
            case OpKind::Affine: {
                const Node& xs = nodes_[static_cast<std::size_t>(n.a)];
                const ParamStore& ps = *stores_[static_cast<std::size_t>(n.store)];
                const ParamBlock& wb = ps.block(n.w_block);
                const ParamBlock& bb = ps.block(n.b_block);
                const int rows = wb.shape[0], cols = wb.shape[1];
                const double* w = ps.flat().data() + wb.offset;
                const double* xv = vals_.data() + xs.off;
                double* dx = grads_.data() + xs.off;
                std::vector<double>& pg = param_grads_[static_cast<std::size_t>(n.store)];
                double* dw = pg.data() + wb.offset;
                double* db = pg.data() + bb.offset;
                for (int r = 0; r < rows; ++r) {
                    const double gr = g[r];
                    if (gr == 0.0) continue;
                    const double* wr = w + static_cast<std::size_t>(r) * cols;
                    axpy(gr, wr, dx, cols);
                    axpy(gr, xv, dw + static_cast<std::size_t>(r) * cols, cols);
                    db[r] += gr;
                }
                break;
            }
            case OpKind::Unary: {
                const Node& xs = nodes_[static_cast<std::size_t>(n.a)];
                const double* y = vals(n);
                const double* xv = vals_.data() + xs.off;
                double* dx = grads_.data() + xs.off;
                switch (n.unary) {
                    case UnaryKind::Tanh:
                        for (int i = 0; i < n.len; ++i) dx[i] += g[i] * (1.0 - y[i] * y[i]);
                        break;
                    case UnaryKind::Sigmoid:
                        for (int i = 0; i < n.len; ++i) dx[i] += g[i] * y[i] * (1.0 - y[i]);
                        break;
                    case UnaryKind::Softplus:
                        for (int i = 0; i < n.len; ++i) dx[i] += g[i] * sigmoid(xv[i]);
                        break;
                }
                break;
            }
            case OpKind::Add: {
                double* da = grads_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                double* db = grads_.data() + nodes_[static_cast<std::size_t>(n.b)].off;
                for (int i = 0; i < n.len; ++i) {
                    da[i] += g[i];
                    db[i] += g[i];
                }
                break;
            }
            case OpKind::Sub: {
                double* da = grads_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                double* db = grads_.data() + nodes_[static_cast<std::size_t>(n.b)].off;
                for (int i = 0; i < n.len; ++i) {
                    da[i] += g[i];
                    db[i] -= g[i];
                }
                break;
            }
            case OpKind::Mul: {
                const Node& an = nodes_[static_cast<std::size_t>(n.a)];
                const Node& bn = nodes_[static_cast<std::size_t>(n.b)];
                const double* av = vals_.data() + an.off;
                const double* bv = vals_.data() + bn.off;
                double* da = grads_.data() + an.off;
                double* db = grads_.data() + bn.off;
                for (int i = 0; i < n.len; ++i) {
                    da[i] += g[i] * bv[i];
                    db[i] += g[i] * av[i];
                }
                break;
            }
            case OpKind::OneMinus: {
                double* da = grads_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                for (int i = 0; i < n.len; ++i) da[i] -= g[i];
                break;
            }
            case OpKind::Scale: {
                double* da = grads_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                for (int i = 0; i < n.len; ++i) da[i] += n.scalar * g[i];
                break;
            }
            case OpKind::Concat: {
                int pos = 0;
                for (int k = 0; k < n.args_len; ++k) {
                    const Node& pn = nodes_[static_cast<std::size_t>(concat_args_[static_cast<std::size_t>(n.args_off + k)])];
                    double* dp = grads_.data() + pn.off;
                    for (int i = 0; i < pn.len; ++i) dp[i] += g[pos + i];
                    pos += pn.len;
                }
                break;
            }
            case OpKind::Slice: {
                double* da = grads_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                for (int i = 0; i < n.len; ++i) da[n.slice_off + i] += g[i];
                break;
            }
            case OpKind::CholCov: {
                const Node& rn = nodes_[static_cast<std::size_t>(n.a)];
                const double* rv = vals_.data() + rn.off;
                double* dr = grads_.data() + rn.off;
                const double l00 = softplus(rv[0]);
                const double l11 = softplus(rv[1]);
                const double l10 = rv[2];
                const double dl00 = 2.0 * l00 * g[0] + l10 * g[1];
                const double dl10 = l00 * g[1] + 2.0 * l10 * g[2];
                const double dl11 = 2.0 * l11 * g[2];
                dr[0] += dl00 * sigmoid(rv[0]);
                dr[1] += dl11 * sigmoid(rv[1]);
                dr[2] += dl10;
                break;
            }
            case OpKind::GaussNll: {
                const Node& mn = nodes_[static_cast<std::size_t>(n.a)];
                const Node& rn = nodes_[static_cast<std::size_t>(n.b)];
                const double* mv = vals_.data() + mn.off;
                const double* rv = vals_.data() + rn.off;
                double* dm = grads_.data() + mn.off;
                double* dr = grads_.data() + rn.off;
                const double l00 = softplus(rv[0]);
                const double l11 = softplus(rv[1]);
                const double l10 = rv[2];
                const double d0 = n.tx - mv[0];
                const double d1 = n.ty - mv[1];
                const double u0 = d0 / l00;
                const double u1 = (d1 - l10 * u0) / l11;
                const double gu0 = u0 - u1 * l10 / l11;  // total derivative wrt u0
                const double gd0 = gu0 / l00;
                const double gd1 = u1 / l11;
                const double g0 = g[0];
                dm[0] -= g0 * gd0;
                dm[1] -= g0 * gd1;
                const double dl00 = (1.0 - gu0 * u0) / l00;
                const double dl11 = (1.0 - u1 * u1) / l11;
                const double dl10 = -u0 * u1 / l11;
                dr[0] += g0 * dl00 * sigmoid(rv[0]);
                dr[1] += g0 * dl11 * sigmoid(rv[1]);
                dr[2] += g0 * dl10;
                break;
            }
        }
    }
    return param_grads_;
}

}  // namespace pucycle
