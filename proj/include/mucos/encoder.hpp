#pragma once
// Trainable sequence classifier: embedding table, a pooling encoder, and a
// softmax classification head over all relations (relation task) or all
// entities (tail task). Gradients are analytic for every parameter.
//
// Encoder variants:
//   MEAN_POOL  masked mean of token embeddings
//   ATTN       one self-attention block (q/k/v projections, scaled dot
//              product over non-PAD positions) followed by a tanh
//              feed-forward layer, then masked mean pooling
//
// PAD positions are excluded from pooling and from attention keys, so PAD
// embedding rows never receive gradient. A ForwardTrace caches enough
// activations to replay the backward pass exactly; traces are invalidated
// by any parameter mutation (model.revision).

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mucos/errors.hpp"
#include "mucos/sequence.hpp"

namespace mucos {

enum class EncoderKind { kMeanPool, kAttention };

// Minimal row-major matrix. Biases are 1xN tensors.
struct Tensor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
    std::size_t size() const { return data.size(); }
    void zero() { std::fill(data.begin(), data.end(), 0.0); }
};

struct EncoderConfig {
    EncoderKind encoder = EncoderKind::kMeanPool;
    std::size_t vocab_size = 0;
    std::size_t embed_dim = 64;
    std::size_t ff_dim = 128;
    std::size_t num_classes = 0;
    std::size_t max_len = 128;
};

struct ParamRef {
    const char* name;
    Tensor* tensor;
};

class EncoderModel {
public:
    EncoderConfig config;
    // Bumped by any code that mutates parameters; outstanding forward
    // traces become stale.
    std::uint64_t revision = 0;

    Tensor embed;              // vocab x d
    Tensor wq, wk, wv;         // d x d (attention only)
    Tensor w1, b1, w2, b2;     // d x ff, 1 x ff, ff x d, 1 x d (attention only)
    Tensor w_cls, b_cls;       // classes x d, 1 x classes

    static EncoderModel init(const EncoderConfig& cfg, std::uint64_t seed) {
        EncoderModel m;
        m.config = cfg;
        m.embed = Tensor(cfg.vocab_size, cfg.embed_dim);
        if (cfg.encoder == EncoderKind::kAttention) {
            m.wq = Tensor(cfg.embed_dim, cfg.embed_dim);
            m.wk = Tensor(cfg.embed_dim, cfg.embed_dim);
            m.wv = Tensor(cfg.embed_dim, cfg.embed_dim);
            m.w1 = Tensor(cfg.embed_dim, cfg.ff_dim);
            m.b1 = Tensor(1, cfg.ff_dim);
            m.w2 = Tensor(cfg.ff_dim, cfg.embed_dim);
            m.b2 = Tensor(1, cfg.embed_dim);
        }
        m.w_cls = Tensor(cfg.num_classes, cfg.embed_dim);
        m.b_cls = Tensor(1, cfg.num_classes);

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-0.05, 0.05);
        for (auto& p : m.parameters()) {
            for (auto& v : p.tensor->data) v = dist(rng);
        }
        return m;
    }

    std::vector<ParamRef> parameters() {
        std::vector<ParamRef> out;
        out.push_back({"embed", &embed});
        if (config.encoder == EncoderKind::kAttention) {
            out.push_back({"wq", &wq});
            out.push_back({"wk", &wk});
            out.push_back({"wv", &wv});
            out.push_back({"w1", &w1});
            out.push_back({"b1", &b1});
            out.push_back({"w2", &w2});
            out.push_back({"b2", &b2});
        }
        out.push_back({"w_cls", &w_cls});
        out.push_back({"b_cls", &b_cls});
        return out;
    }
};

// Gradients in EncoderModel::parameters() order.
struct GradientSet {
    std::vector<Tensor> tensors;

    static GradientSet zeros_like(EncoderModel& m) {
        GradientSet g;
        for (const auto& p : m.parameters()) {
            g.tensors.emplace_back(p.tensor->rows, p.tensor->cols);
        }
        return g;
    }

    void zero() {
        for (auto& t : tensors) t.zero();
    }

    void scale(double s) {
        for (auto& t : tensors) {
            for (auto& v : t.data) v *= s;
        }
    }
};

struct ForwardTrace {
    std::uint64_t model_revision = 0;
    std::vector<std::uint32_t> token_ids;
    std::vector<std::size_t> valid;  // positions with attention mask 1
    std::vector<double> pooled;
    std::vector<double> probs;
    // Attention-only activations, rows indexed like `valid`.
    Tensor x, q, k, v, attn, o, u, f;
};

namespace detail {

inline void softmax_inplace(double* z, std::size_t n) {
    double zmax = z[0];
    for (std::size_t i = 1; i < n; ++i) zmax = std::max(zmax, z[i]);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = std::exp(z[i] - zmax);
        sum += z[i];
    }
    for (std::size_t i = 0; i < n; ++i) z[i] /= sum;
}

}  // namespace detail

// Probability vector over the classes. PAD positions contribute nothing.
inline std::vector<double> forward(const EncoderModel& m, const InputSequence& seq,
                                   ForwardTrace* trace = nullptr) {
    const auto& cfg = m.config;
    const std::size_t d = cfg.embed_dim;
    if (seq.token_ids.size() != seq.attention_mask.size()) {
        throw std::invalid_argument("forward: token/mask length mismatch");
    }
    std::vector<std::size_t> valid;
    for (std::size_t i = 0; i < seq.token_ids.size(); ++i) {
        if (seq.token_ids[i] >= cfg.vocab_size) {
            throw std::invalid_argument("forward: token id out of vocabulary range");
        }
        if (seq.attention_mask[i]) valid.push_back(i);
    }
    const std::size_t p = valid.size();

    std::vector<double> pooled(d, 0.0);
    Tensor x, q, k, v, attn, o, u, f;
    if (cfg.encoder == EncoderKind::kMeanPool) {
        for (std::size_t i : valid) {
            const double* e = m.embed.row(seq.token_ids[i]);
            for (std::size_t c = 0; c < d; ++c) pooled[c] += e[c];
        }
        if (p > 0) {
            for (auto& c : pooled) c /= static_cast<double>(p);
        }
    } else {
        const std::size_t ff = cfg.ff_dim;
        x = Tensor(p, d);
        q = Tensor(p, d);
        k = Tensor(p, d);
        v = Tensor(p, d);
        for (std::size_t i = 0; i < p; ++i) {
            std::memcpy(x.row(i), m.embed.row(seq.token_ids[valid[i]]), d * sizeof(double));
        }
        auto project = [&](const Tensor& w, Tensor& out) {
            for (std::size_t i = 0; i < p; ++i) {
                for (std::size_t c = 0; c < d; ++c) {
                    double acc = 0.0;
                    for (std::size_t e = 0; e < d; ++e) acc += x.at(i, e) * w.at(e, c);
                    out.at(i, c) = acc;
                }
            }
        };
        project(m.wq, q);
        project(m.wk, k);
        project(m.wv, v);

        const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
        attn = Tensor(p, p);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                double acc = 0.0;
                for (std::size_t e = 0; e < d; ++e) acc += q.at(i, e) * k.at(j, e);
                attn.at(i, j) = acc * inv_sqrt_d;
            }
            if (p > 0) detail::softmax_inplace(attn.row(i), p);
        }

        o = Tensor(p, d);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                const double a = attn.at(i, j);
                for (std::size_t e = 0; e < d; ++e) o.at(i, e) += a * v.at(j, e);
            }
        }

        u = Tensor(p, ff);
        f = Tensor(p, d);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t c = 0; c < ff; ++c) {
                double acc = m.b1.at(0, c);
                for (std::size_t e = 0; e < d; ++e) acc += o.at(i, e) * m.w1.at(e, c);
                u.at(i, c) = std::tanh(acc);
            }
            for (std::size_t e = 0; e < d; ++e) {
                double acc = m.b2.at(0, e);
                for (std::size_t c = 0; c < ff; ++c) acc += u.at(i, c) * m.w2.at(c, e);
                f.at(i, e) = acc;
                pooled[e] += acc;
            }
        }
        if (p > 0) {
            for (auto& c : pooled) c /= static_cast<double>(p);
        }
    }

    std::vector<double> probs(cfg.num_classes);
    for (std::size_t c = 0; c < cfg.num_classes; ++c) {
        double acc = m.b_cls.at(0, c);
        for (std::size_t e = 0; e < d; ++e) acc += m.w_cls.at(c, e) * pooled[e];
        probs[c] = acc;
    }
    detail::softmax_inplace(probs.data(), probs.size());

    if (trace) {
        trace->model_revision = m.revision;
        trace->token_ids = seq.token_ids;
        trace->valid = std::move(valid);
        trace->pooled = pooled;
        trace->probs = probs;
        trace->x = std::move(x);
        trace->q = std::move(q);
        trace->k = std::move(k);
        trace->v = std::move(v);
        trace->attn = std::move(attn);
        trace->o = std::move(o);
        trace->u = std::move(u);
        trace->f = std::move(f);
    }
    return probs;
}

struct LossResult {
    double value = 0.0;
    bool clamped = false;  // probability hit the 1e-12 log floor
};

inline constexpr double kLogFloor = 1e-12;

inline LossResult cross_entropy(const std::vector<double>& probs, std::size_t label) {
    if (label >= probs.size()) throw std::invalid_argument("cross_entropy: label out of range");
    LossResult r;
    double p = probs[label];
    if (p < kLogFloor) {
        p = kLogFloor;
        r.clamped = true;
    }
    r.value = -std::log(p);
    return r;
}

// Accumulates d(cross_entropy)/d(parameter) into `grads` (parameters()
// order). The classifier-layer gradient is the softmax identity
// (probs - onehot) x pooled; everything upstream is chained from it.
inline void backward(const EncoderModel& m, const ForwardTrace& trace, std::size_t label,
                     GradientSet& grads) {
    if (trace.model_revision != m.revision) {
        throw std::logic_error("backward: stale forward trace (parameters changed)");
    }
    const auto& cfg = m.config;
    const std::size_t d = cfg.embed_dim;
    const std::size_t p = trace.valid.size();
    if (label >= cfg.num_classes) throw std::invalid_argument("backward: label out of range");

    const bool attn_kind = cfg.encoder == EncoderKind::kAttention;
    Tensor& g_embed = grads.tensors[0];
    Tensor& g_w_cls = grads.tensors[attn_kind ? 8 : 1];
    Tensor& g_b_cls = grads.tensors[attn_kind ? 9 : 2];

    std::vector<double> dlogits = trace.probs;
    dlogits[label] -= 1.0;

    std::vector<double> dpooled(d, 0.0);
    for (std::size_t c = 0; c < cfg.num_classes; ++c) {
        const double dl = dlogits[c];
        g_b_cls.at(0, c) += dl;
        for (std::size_t e = 0; e < d; ++e) {
            g_w_cls.at(c, e) += dl * trace.pooled[e];
            dpooled[e] += dl * m.w_cls.at(c, e);
        }
    }
    if (p == 0) return;
    const double inv_p = 1.0 / static_cast<double>(p);

    if (!attn_kind) {
        for (std::size_t i : trace.valid) {
            double* ge = g_embed.row(trace.token_ids[i]);
            for (std::size_t e = 0; e < d; ++e) ge[e] += dpooled[e] * inv_p;
        }
        return;
    }

    const std::size_t ff = cfg.ff_dim;
    Tensor& g_wq = grads.tensors[1];
    Tensor& g_wk = grads.tensors[2];
    Tensor& g_wv = grads.tensors[3];
    Tensor& g_w1 = grads.tensors[4];
    Tensor& g_b1 = grads.tensors[5];
    Tensor& g_w2 = grads.tensors[6];
    Tensor& g_b2 = grads.tensors[7];

    Tensor dx(p, d), dq(p, d), dk(p, d), dv(p, d), do_(p, d);
    for (std::size_t i = 0; i < p; ++i) {
        // pooled -> f_i -> u_i -> o_i
        std::vector<double> du(ff, 0.0);
        for (std::size_t e = 0; e < d; ++e) {
            const double df = dpooled[e] * inv_p;
            g_b2.at(0, e) += df;
            for (std::size_t c = 0; c < ff; ++c) {
                g_w2.at(c, e) += trace.u.at(i, c) * df;
                du[c] += df * m.w2.at(c, e);
            }
        }
        for (std::size_t c = 0; c < ff; ++c) {
            const double uval = trace.u.at(i, c);
            const double dz = du[c] * (1.0 - uval * uval);
            g_b1.at(0, c) += dz;
            for (std::size_t e = 0; e < d; ++e) {
                g_w1.at(e, c) += trace.o.at(i, e) * dz;
                do_.at(i, e) += dz * m.w1.at(e, c);
            }
        }
    }

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < p; ++i) {
        // o_i = sum_j attn_ij v_j; softmax over the scores row
        std::vector<double> da(p, 0.0);
        for (std::size_t j = 0; j < p; ++j) {
            double acc = 0.0;
            const double a = trace.attn.at(i, j);
            for (std::size_t e = 0; e < d; ++e) {
                acc += do_.at(i, e) * trace.v.at(j, e);
                dv.at(j, e) += a * do_.at(i, e);
            }
            da[j] = acc;
        }
        double dot = 0.0;
        for (std::size_t j = 0; j < p; ++j) dot += trace.attn.at(i, j) * da[j];
        for (std::size_t j = 0; j < p; ++j) {
            const double ds = trace.attn.at(i, j) * (da[j] - dot) * inv_sqrt_d;
            for (std::size_t e = 0; e < d; ++e) {
                dq.at(i, e) += ds * trace.k.at(j, e);
                dk.at(j, e) += ds * trace.q.at(i, e);
            }
        }
    }

    auto back_projection = [&](const Tensor& w, Tensor& gw, const Tensor& dout) {
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t e = 0; e < d; ++e) {
                const double xv = trace.x.at(i, e);
                double acc = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    gw.at(e, c) += xv * dout.at(i, c);
                    acc += dout.at(i, c) * w.at(e, c);
                }
                dx.at(i, e) += acc;
            }
        }
    };
    back_projection(m.wq, g_wq, dq);
    back_projection(m.wk, g_wk, dk);
    back_projection(m.wv, g_wv, dv);

    for (std::size_t i = 0; i < p; ++i) {
        double* ge = g_embed.row(trace.token_ids[trace.valid[i]]);
        for (std::size_t e = 0; e < d; ++e) ge[e] += dx.at(i, e);
    }
}

// ---------------------------------------------------------------------------
// Checkpoint container: magic + version, config echo, a manifest string, and
// every parameter tensor with its name and shape. Load rejects unknown
// versions and any name/shape mismatch.

inline constexpr char kCheckpointMagic[4] = {'M', 'C', 'S', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw CheckpointError("checkpoint truncated");
    return v;
}

inline void write_string(std::ostream& out, const std::string& s) {
    write_pod<std::uint64_t>(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
    const auto len = read_pod<std::uint64_t>(in);
    if (len > (1ull << 30)) throw CheckpointError("checkpoint string length implausible");
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (!in) throw CheckpointError("checkpoint truncated");
    return s;
}

}  // namespace detail

inline void save_checkpoint(EncoderModel& m, const std::string& path,
                            const std::string& manifest = "") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path);
    out.write(kCheckpointMagic, 4);
    detail::write_pod(out, kCheckpointVersion);
    detail::write_pod<std::uint8_t>(out, m.config.encoder == EncoderKind::kAttention ? 1 : 0);
    detail::write_pod<std::uint64_t>(out, m.config.vocab_size);
    detail::write_pod<std::uint64_t>(out, m.config.embed_dim);
    detail::write_pod<std::uint64_t>(out, m.config.ff_dim);
    detail::write_pod<std::uint64_t>(out, m.config.num_classes);
    detail::write_pod<std::uint64_t>(out, m.config.max_len);
    detail::write_string(out, manifest);

    const auto params = m.parameters();
    detail::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
    for (const auto& p : params) {
        detail::write_string(out, p.name);
        detail::write_pod<std::uint64_t>(out, p.tensor->rows);
        detail::write_pod<std::uint64_t>(out, p.tensor->cols);
        out.write(reinterpret_cast<const char*>(p.tensor->data.data()),
                  static_cast<std::streamsize>(p.tensor->data.size() * sizeof(double)));
    }
    if (!out) throw CheckpointError("checkpoint write failed: " + path);
}

struct LoadedCheckpoint {
    EncoderModel model;
    std::string manifest;
};

inline LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
        throw CheckpointError("not a checkpoint file: " + path);
    }
    const auto version = detail::read_pod<std::uint32_t>(in);
    if (version != kCheckpointVersion) {
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    }

    EncoderConfig cfg;
    cfg.encoder = detail::read_pod<std::uint8_t>(in) ? EncoderKind::kAttention
                                                     : EncoderKind::kMeanPool;
    cfg.vocab_size = detail::read_pod<std::uint64_t>(in);
    cfg.embed_dim = detail::read_pod<std::uint64_t>(in);
    cfg.ff_dim = detail::read_pod<std::uint64_t>(in);
    cfg.num_classes = detail::read_pod<std::uint64_t>(in);
    cfg.max_len = detail::read_pod<std::uint64_t>(in);

    LoadedCheckpoint loaded;
    loaded.manifest = detail::read_string(in);
    loaded.model = EncoderModel::init(cfg, 0);

    auto params = loaded.model.parameters();
    const auto count = detail::read_pod<std::uint32_t>(in);
    if (count != params.size()) {
        throw CheckpointError("checkpoint parameter count mismatch");
    }
    for (auto& p : params) {
        const auto name = detail::read_string(in);
        const auto rows = detail::read_pod<std::uint64_t>(in);
        const auto cols = detail::read_pod<std::uint64_t>(in);
        if (name != p.name || rows != p.tensor->rows || cols != p.tensor->cols) {
            throw CheckpointError("checkpoint shape mismatch for parameter '" + name +
                                  "' (expected " + p.name + " " + std::to_string(p.tensor->rows) +
                                  "x" + std::to_string(p.tensor->cols) + ")");
        }
        in.read(reinterpret_cast<char*>(p.tensor->data.data()),
                static_cast<std::streamsize>(p.tensor->data.size() * sizeof(double)));
        if (!in) throw CheckpointError("checkpoint truncated in tensor data");
    }
    return loaded;
}

}  // namespace mucos
