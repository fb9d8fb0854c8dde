#include "indicmt/autodiff.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "indicmt/error.hpp"

namespace indicmt::ad {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        raise("model.ShapeMismatch", std::string(op) + ": " + std::to_string(a.rows()) +
                                         "x" + std::to_string(a.cols()) + " vs " +
                                         std::to_string(b.rows()) + "x" +
                                         std::to_string(b.cols()));
}

} // namespace

Var Tape::make(Matrix value, BackFn back) {
    nodes_.push_back({std::move(value), Matrix(), std::move(back)});
    Node& n = nodes_.back();
    n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(Matrix value) { return make(std::move(value)); }

Var Tape::param(Parameter& p) {
    Var v = make(p.value);
    param_nodes_.emplace_back(v.id, &p);
    return v;
}

Var Tape::add(Var a, Var b) {
    check_same_shape(value(a), value(b), "add");
    const int ia = a.id, ib = b.id;
    return make(value(a) + value(b), [ia, ib](Tape& t, int self) {
        const Matrix& g = t.val_grad(self);
        t.grad_mut(ia) += g;
        t.grad_mut(ib) += g;
    });
}

Var Tape::add_rowvec(Var a, Var bias) {
    const Matrix& av = value(a);
    const Matrix& bv = value(bias);
    if (bv.rows() != 1 || bv.cols() != av.cols())
        raise("model.ShapeMismatch", "add_rowvec: bias must be 1 x cols");
    Matrix out = av.rowwise() + bv.row(0);
    const int ia = a.id, ib = bias.id;
    return make(std::move(out), [ia, ib](Tape& t, int self) {
        const Matrix& g = t.val_grad(self);
        t.grad_mut(ia) += g;
        t.grad_mut(ib).row(0) += g.colwise().sum();
    });
}

Var Tape::matmul(Var a, Var b) {
    const Matrix& av = value(a);
    const Matrix& bv = value(b);
    if (av.cols() != bv.rows())
        raise("model.ShapeMismatch", "matmul: inner dimensions disagree");
    Matrix out = av * bv;
    const int ia = a.id, ib = b.id;
    return make(std::move(out), [ia, ib](Tape& t, int self) {
        const Matrix& g = t.val_grad(self);
        t.grad_mut(ia).noalias() += g * t.val(ib).transpose();
        t.grad_mut(ib).noalias() += t.val(ia).transpose() * g;
    });
}

Var Tape::scale(Var a, double c) {
    const int ia = a.id;
    return make(value(a) * c, [ia, c](Tape& t, int self) {
        t.grad_mut(ia) += c * t.val_grad(self);
    });
}

Var Tape::relu(Var a) {
    const int ia = a.id;
    return make(value(a).cwiseMax(0.0), [ia](Tape& t, int self) {
        const Matrix& g = t.val_grad(self);
        const Matrix& x = t.val(ia);
        t.grad_mut(ia).array() += g.array() * (x.array() > 0.0).cast<double>();
    });
}

Var Tape::layer_norm(Var x, Var gain, Var bias, double eps) {
    const Matrix& xv = value(x);
    const Matrix& gv = value(gain);
    const Matrix& bv = value(bias);
    if (gv.rows() != 1 || gv.cols() != xv.cols() || bv.rows() != 1 ||
        bv.cols() != xv.cols())
        raise("model.ShapeMismatch", "layer_norm: gain/bias must be 1 x cols");

    const auto rows = xv.rows();
    const auto cols = xv.cols();
    auto cache = std::make_shared<std::pair<Matrix, Eigen::VectorXd>>();
    Matrix& xhat = cache->first;
    Eigen::VectorXd& inv_std = cache->second;
    xhat.resize(rows, cols);
    inv_std.resize(rows);
    Matrix out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double mu = xv.row(r).mean();
        const double var = (xv.row(r).array() - mu).square().mean();
        const double is = 1.0 / std::sqrt(var + eps);
        inv_std(r) = is;
        xhat.row(r) = (xv.row(r).array() - mu) * is;
        out.row(r) = xhat.row(r).cwiseProduct(gv.row(0)) + bv.row(0);
    }
    const int ix = x.id, ig = gain.id, ib = bias.id;
    return make(std::move(out), [ix, ig, ib, cache](Tape& t, int self) {
        const Matrix& g = t.val_grad(self);
        const Matrix& xhat = cache->first;
        const Eigen::VectorXd& inv_std = cache->second;
        const Matrix& gainv = t.val(ig);
        t.grad_mut(ig).row(0) += g.cwiseProduct(xhat).colwise().sum();
        t.grad_mut(ib).row(0) += g.colwise().sum();
        Matrix& dx = t.grad_mut(ix);
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            const auto dxhat = g.row(r).cwiseProduct(gainv.row(0));
            const double mean_dxhat = dxhat.mean();
            const double mean_dxhat_xhat = dxhat.cwiseProduct(xhat.row(r)).mean();
            dx.row(r) += inv_std(r) * (dxhat.array() - mean_dxhat -
                                       xhat.row(r).array() * mean_dxhat_xhat)
                                          .matrix();
        }
    });
}

Var Tape::dropout(Var a, double p, Rng& rng, bool enabled) {
    if (!enabled || p <= 0.0) return a;
    const Matrix& av = value(a);
    auto mask = std::make_shared<Matrix>(av.rows(), av.cols());
    const double keep = 1.0 - p;
    for (Eigen::Index c = 0; c < av.cols(); ++c)
        for (Eigen::Index r = 0; r < av.rows(); ++r)
            (*mask)(r, c) = rng.uniform() < keep ? 1.0 / keep : 0.0;
    const int ia = a.id;
    return make(av.cwiseProduct(*mask), [ia, mask](Tape& t, int self) {
        t.grad_mut(ia) += t.val_grad(self).cwiseProduct(*mask);
    });
}

Var Tape::embedding(const std::vector<int>& ids, Parameter& table, double scale) {
    const auto vocab = table.value.rows();
    for (int id : ids)
        if (id < 0 || id >= vocab)
            raise("model.ShapeMismatch", "embedding id out of vocabulary");
    Var tv = param(table);
    Matrix out(static_cast<Eigen::Index>(ids.size()), table.value.cols());
    for (std::size_t i = 0; i < ids.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = table.value.row(ids[i]) * scale;
    const int it = tv.id;
    auto ids_copy = std::make_shared<std::vector<int>>(ids);
    return make(std::move(out), [it, ids_copy, scale](Tape& t, int self) {
        const Matrix& g = t.val_grad(self);
        Matrix& dt = t.grad_mut(it);
        for (std::size_t i = 0; i < ids_copy->size(); ++i)
            dt.row((*ids_copy)[i]) += g.row(static_cast<Eigen::Index>(i)) * scale;
    });
}

Var Tape::attention(Var q, Var k, Var v, AttentionSpec spec) {
    const Matrix& qv = value(q);
    const Matrix& kv = value(k);
    const Matrix& vv = value(v);
    const int d_model = static_cast<int>(qv.cols());
    if (d_model % spec.num_heads != 0)
        raise("model.ShapeMismatch", "attention: d_model not divisible by heads");
    if (kv.cols() != d_model || vv.cols() != d_model || kv.rows() != vv.rows())
        raise("model.ShapeMismatch", "attention: K/V shapes disagree");
    if (qv.rows() != static_cast<Eigen::Index>(spec.batch) * spec.q_len ||
        kv.rows() != static_cast<Eigen::Index>(spec.batch) * spec.k_len)
        raise("model.ShapeMismatch", "attention: rows do not match spec");

    const int dk = d_model / spec.num_heads;
    const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    // Softmax matrices are kept for the backward pass.
    auto probs = std::make_shared<std::vector<Matrix>>();
    probs->reserve(static_cast<std::size_t>(spec.batch) * spec.num_heads);

    Matrix out = Matrix::Zero(qv.rows(), d_model);
    for (int b = 0; b < spec.batch; ++b) {
        const int valid_keys =
            spec.key_lengths.empty() ? spec.k_len : spec.key_lengths[b];
        for (int h = 0; h < spec.num_heads; ++h) {
            const auto qb = qv.block(b * spec.q_len, h * dk, spec.q_len, dk);
            const auto kb = kv.block(b * spec.k_len, h * dk, spec.k_len, dk);
            const auto vb = vv.block(b * spec.k_len, h * dk, spec.k_len, dk);
            Matrix scores = qb * kb.transpose() * inv_sqrt_dk;
            for (int i = 0; i < spec.q_len; ++i) {
                const int limit = spec.causal ? std::min(valid_keys, i + 1) : valid_keys;
                for (int j = limit; j < spec.k_len; ++j) scores(i, j) = kNegInf;
            }
            // Row softmax; every row keeps at least key 0 unmasked.
            Matrix p(spec.q_len, spec.k_len);
            for (int i = 0; i < spec.q_len; ++i) {
                const double m = scores.row(i).maxCoeff();
                Eigen::ArrayXd e = (scores.row(i).array() - m).exp();
                for (int j = 0; j < spec.k_len; ++j)
                    if (std::isinf(scores(i, j)) && scores(i, j) < 0) e(j) = 0.0;
                p.row(i) = (e / e.sum()).matrix();
            }
            out.block(b * spec.q_len, h * dk, spec.q_len, dk).noalias() = p * vb;
            probs->push_back(std::move(p));
        }
    }

    const int iq = q.id, ik = k.id, iv = v.id;
    return make(std::move(out),
                [iq, ik, iv, spec, probs, dk, inv_sqrt_dk](Tape& t, int self) {
                    const Matrix& g = t.val_grad(self);
                    const Matrix& qv = t.val(iq);
                    const Matrix& kv = t.val(ik);
                    const Matrix& vv = t.val(iv);
                    Matrix& dq = t.grad_mut(iq);
                    Matrix& dkm = t.grad_mut(ik);
                    Matrix& dvm = t.grad_mut(iv);
                    std::size_t idx = 0;
                    for (int b = 0; b < spec.batch; ++b) {
                        for (int h = 0; h < spec.num_heads; ++h, ++idx) {
                            const Matrix& p = (*probs)[idx];
                            const auto qb =
                                qv.block(b * spec.q_len, h * dk, spec.q_len, dk);
                            const auto kb =
                                kv.block(b * spec.k_len, h * dk, spec.k_len, dk);
                            const auto vb =
                                vv.block(b * spec.k_len, h * dk, spec.k_len, dk);
                            const auto go =
                                g.block(b * spec.q_len, h * dk, spec.q_len, dk);
                            Matrix dp = go * vb.transpose();
                            dvm.block(b * spec.k_len, h * dk, spec.k_len, dk)
                                .noalias() += p.transpose() * go;
                            // d softmax: ds = p .* (dp - rowsum(dp .* p))
                            Matrix ds(p.rows(), p.cols());
                            for (Eigen::Index i = 0; i < p.rows(); ++i) {
                                const double dot = dp.row(i).dot(p.row(i));
                                ds.row(i) =
                                    p.row(i).cwiseProduct(dp.row(i).array() - dot)
                                        .matrix();
                            }
                            dq.block(b * spec.q_len, h * dk, spec.q_len, dk)
                                .noalias() += ds * kb * inv_sqrt_dk;
                            dkm.block(b * spec.k_len, h * dk, spec.k_len, dk)
                                .noalias() += ds.transpose() * qb * inv_sqrt_dk;
                        }
                    }
                });
}

Var Tape::log_softmax_rows(Var a) {
    const Matrix& av = value(a);
    Matrix out(av.rows(), av.cols());
    for (Eigen::Index r = 0; r < av.rows(); ++r) {
        const double m = av.row(r).maxCoeff();
        const double lse = m + std::log((av.row(r).array() - m).exp().sum());
        out.row(r) = av.row(r).array() - lse;
    }
    const int ia = a.id;
    return make(std::move(out), [ia](Tape& t, int self) {
        const Matrix& g = t.val_grad(self);
        const Matrix& y = t.val(self); // log-probs; exp(y) is the softmax
        Matrix& dx = t.grad_mut(ia);
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            const double gsum = g.row(r).sum();
            dx.row(r) += (g.row(r).array() - y.row(r).array().exp() * gsum).matrix();
        }
    });
}

Var Tape::nll_label_smoothed(Var log_probs, std::vector<int> targets, double eps,
                             std::vector<unsigned char> active) {
    const Matrix& lp = value(log_probs);
    const auto rows = lp.rows();
    const auto vocab = lp.cols();
    if (static_cast<Eigen::Index>(targets.size()) != rows ||
        static_cast<Eigen::Index>(active.size()) != rows)
        raise("model.ShapeMismatch", "nll: targets/active must match rows");

    double n_active = 0.0;
    double total = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!active[r]) continue;
        n_active += 1.0;
        const double nll = -lp(r, targets[r]);
        const double smooth = -lp.row(r).mean();
        total += (1.0 - eps) * nll + eps * smooth;
    }
    if (n_active == 0.0) raise("model.ShapeMismatch", "nll: no active targets");
    Matrix out(1, 1);
    out(0, 0) = total / n_active;

    const int ilp = log_probs.id;
    auto tg = std::make_shared<std::vector<int>>(std::move(targets));
    auto ac = std::make_shared<std::vector<unsigned char>>(std::move(active));
    const double inv_n = 1.0 / n_active;
    const double vocab_d = static_cast<double>(vocab);
    return make(std::move(out), [ilp, tg, ac, eps, inv_n, vocab_d](Tape& t, int self) {
        const double g = t.val_grad(self)(0, 0);
        Matrix& dlp = t.grad_mut(ilp);
        const double smooth_term = g * inv_n * eps / vocab_d;
        const double target_term = g * inv_n * (1.0 - eps);
        for (Eigen::Index r = 0; r < dlp.rows(); ++r) {
            if (!(*ac)[r]) continue;
            dlp.row(r).array() -= smooth_term;
            dlp(r, (*tg)[r]) -= target_term;
        }
    });
}

void Tape::backward(Var loss) {
    Node& top = nodes_[loss.id];
    if (top.value.rows() != 1 || top.value.cols() != 1)
        raise("model.ShapeMismatch", "backward: loss must be scalar");
    top.grad(0, 0) = 1.0;
    for (int i = loss.id; i >= 0; --i) {
        if (nodes_[i].back) nodes_[i].back(*this, i);
    }
    for (auto& [id, p] : param_nodes_) p->grad += nodes_[id].grad;
}

} // namespace indicmt::ad
