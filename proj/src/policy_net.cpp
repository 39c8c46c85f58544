#include "navrep/policy_net.hpp"

#include <cmath>
#include <stdexcept>

namespace navrep {

namespace {

template <typename Self, typename View, typename Ptr>
std::vector<View> list_params(Self& w) {
  std::vector<View> out;
  auto add_m = [&out](const std::string& name, auto& m) {
    out.push_back({name, const_cast<Ptr>(m.data()), static_cast<long>(m.size())});
  };
  for (size_t i = 0; i < w.ff_w.size(); ++i) {
    add_m("ff_w" + std::to_string(i), w.ff_w[i]);
    add_m("ff_b" + std::to_string(i), w.ff_b[i]);
  }
  add_m("gru_wz", w.gru_wz);
  add_m("gru_uz", w.gru_uz);
  add_m("gru_bz", w.gru_bz);
  add_m("gru_wr", w.gru_wr);
  add_m("gru_ur", w.gru_ur);
  add_m("gru_br", w.gru_br);
  add_m("gru_wn", w.gru_wn);
  add_m("gru_un", w.gru_un);
  add_m("gru_bn", w.gru_bn);
  add_m("actor_w", w.actor_w);
  add_m("actor_b", w.actor_b);
  add_m("logits_w", w.logits_w);
  add_m("logits_b", w.logits_b);
  add_m("critic_w", w.critic_w);
  add_m("critic_b", w.critic_b);
  add_m("value_w", w.value_w);
  add_m("value_b", w.value_b);
  return out;
}

inline Vec sigmoid(const Vec& x) {
  return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

}  // namespace

std::vector<NetworkWeights::ParamView> NetworkWeights::params() {
  return list_params<NetworkWeights, ParamView, double*>(*this);
}

std::vector<NetworkWeights::ConstParamView> NetworkWeights::params() const {
  return list_params<const NetworkWeights, ConstParamView, const double*>(*this);
}

long NetworkWeights::total_size() const {
  long n = 0;
  for (const auto& p : params()) n += p.size;
  return n;
}

void NetworkWeights::set_zero() {
  for (auto& p : params()) std::fill(p.data, p.data + p.size, 0.0);
}

bool NetworkWeights::all_finite() const {
  for (const auto& p : params()) {
    for (long i = 0; i < p.size; ++i) {
      if (!std::isfinite(p.data[i])) return false;
    }
  }
  return true;
}

NetworkWeights make_zero_weights(const NetworkConfig& config) {
  NetworkWeights w;
  w.config = config;
  const int k = config.layer_width;
  int in = config.input_dim;
  for (int i = 0; i < config.n_shared_ff; ++i) {
    w.ff_w.emplace_back(Mat::Zero(k, in));
    w.ff_b.emplace_back(Vec::Zero(k));
    in = k;
  }
  w.gru_wz = Mat::Zero(k, in);
  w.gru_uz = Mat::Zero(k, k);
  w.gru_bz = Vec::Zero(k);
  w.gru_wr = Mat::Zero(k, in);
  w.gru_ur = Mat::Zero(k, k);
  w.gru_br = Vec::Zero(k);
  w.gru_wn = Mat::Zero(k, in);
  w.gru_un = Mat::Zero(k, k);
  w.gru_bn = Vec::Zero(k);
  w.actor_w = Mat::Zero(k, k);
  w.actor_b = Vec::Zero(k);
  w.logits_w = Mat::Zero(config.n_actions, k);
  w.logits_b = Vec::Zero(config.n_actions);
  w.critic_w = Mat::Zero(k, k);
  w.critic_b = Vec::Zero(k);
  w.value_w = Mat::Zero(1, k);
  w.value_b = Vec::Zero(1);
  return w;
}

NetworkWeights init_weights(const NetworkConfig& config, Rng& rng) {
  NetworkWeights w = make_zero_weights(config);
  // Fan-in scaled uniform weights; biases stay zero.
  auto fill = [&rng](Mat& m) {
    const double bound = std::sqrt(1.0 / static_cast<double>(m.cols()));
    for (long i = 0; i < m.size(); ++i) {
      m.data()[i] = rng.uniform(-bound, bound);
    }
  };
  for (auto& m : w.ff_w) fill(m);
  fill(w.gru_wz);
  fill(w.gru_uz);
  fill(w.gru_wr);
  fill(w.gru_ur);
  fill(w.gru_wn);
  fill(w.gru_un);
  fill(w.actor_w);
  fill(w.logits_w);
  fill(w.critic_w);
  fill(w.value_w);
  return w;
}

Vec softmax(const Vec& logits) {
  const double m = logits.maxCoeff();
  Vec e = (logits.array() - m).exp();
  return e / e.sum();
}

Vec zero_hidden(const NetworkConfig& config) {
  return Vec::Zero(config.layer_width);
}

namespace {

// Per-step intermediates cached during the forward pass for BPTT.
struct StepCache {
  std::vector<Vec> ff;  // post-tanh activations, per shared layer
  Vec h_prev, z, r, n, g, h;  // g = Un * h_prev
  Vec actor_h, critic_h;
  Vec logits, probs;
  double value = 0.0;
};

void forward_step(const NetworkWeights& w, const Vec& obs, const Vec& hidden,
                  StepCache& c) {
  const Vec* x = &obs;
  c.ff.resize(w.ff_w.size());
  for (size_t i = 0; i < w.ff_w.size(); ++i) {
    c.ff[i] = (w.ff_w[i] * (*x) + w.ff_b[i]).array().tanh();
    x = &c.ff[i];
  }
  c.h_prev = hidden;
  c.z = sigmoid(w.gru_wz * (*x) + w.gru_uz * hidden + w.gru_bz);
  c.r = sigmoid(w.gru_wr * (*x) + w.gru_ur * hidden + w.gru_br);
  c.g = w.gru_un * hidden;
  c.n = (w.gru_wn * (*x) + c.r.cwiseProduct(c.g) + w.gru_bn).array().tanh();
  c.h = (Vec::Ones(c.z.size()) - c.z).cwiseProduct(c.n) +
        c.z.cwiseProduct(hidden);
  c.actor_h = (w.actor_w * c.h + w.actor_b).array().tanh();
  c.logits = w.logits_w * c.actor_h + w.logits_b;
  c.probs = softmax(c.logits);
  c.critic_h = (w.critic_w * c.h + w.critic_b).array().tanh();
  c.value = (w.value_w * c.critic_h)(0) + w.value_b(0);
}

double log_prob_of(const Vec& logits, int action) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits(action) - lse;
}

}  // namespace

PolicyOutput forward(const NetworkWeights& w, const Vec& observation,
                     const Vec& hidden) {
  if (observation.size() != w.config.input_dim ||
      hidden.size() != w.config.layer_width) {
    throw std::invalid_argument("forward: dimension mismatch");
  }
  if (!observation.allFinite() || !hidden.allFinite()) {
    throw std::invalid_argument("forward: non-finite input");
  }
  StepCache c;
  forward_step(w, observation, hidden, c);
  return {c.logits, c.probs, c.value, c.h};
}

std::pair<ActionId, double> sample_action(const Vec& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  int a = static_cast<int>(probs.size()) - 1;
  for (int i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    if (u < acc) {
      a = i;
      break;
    }
  }
  return {static_cast<ActionId>(a), std::log(probs(a))};
}

ActionId argmax_action(const Vec& probs) {
  int a = 0;
  probs.maxCoeff(&a);
  return static_cast<ActionId>(a);
}

namespace {

struct LossAccum {
  double policy = 0.0, value = 0.0, entropy = 0.0;
  long clipped = 0;
  double kl = 0.0;
  long n = 0;
};

// Per-step loss terms and (optionally) the gradient w.r.t. logits and value.
void step_loss(const StepCache& c, const SegmentStep& s, const LossCoefs& coefs,
               LossAccum& acc, Vec* dlogits, double* dvalue) {
  const double logp = log_prob_of(c.logits, s.action);
  const double ratio = std::exp(logp - s.old_logp);
  const double a = s.advantage;
  const bool clip_active = (a > 0.0 && ratio > 1.0 + coefs.clip_ratio) ||
                           (a < 0.0 && ratio < 1.0 - coefs.clip_ratio);
  const double surr1 = ratio * a;
  const double surr2 =
      std::clamp(ratio, 1.0 - coefs.clip_ratio, 1.0 + coefs.clip_ratio) * a;
  acc.policy += -std::min(surr1, surr2);
  const double verr = c.value - s.ret;
  acc.value += 0.5 * verr * verr;
  double ent = 0.0;
  for (int i = 0; i < c.probs.size(); ++i) {
    if (c.probs(i) > 0.0) ent -= c.probs(i) * std::log(c.probs(i));
  }
  acc.entropy += ent;
  if (clip_active) ++acc.clipped;
  acc.kl += s.old_logp - logp;
  ++acc.n;

  if (dlogits != nullptr) {
    Vec d = Vec::Zero(c.probs.size());
    if (!clip_active) {
      // d(-ratio*A)/dlogits = -A * ratio * (e_a - probs)
      d = a * ratio * c.probs;
      d(s.action) -= a * ratio;
    }
    // Entropy bonus: loss term is -entropy_coef * H.
    const double H = ent;
    for (int i = 0; i < c.probs.size(); ++i) {
      if (c.probs(i) > 0.0) {
        d(i) += coefs.entropy_coef * c.probs(i) * (std::log(c.probs(i)) + H);
      }
    }
    *dlogits = d;
    *dvalue = coefs.value_coef * verr;
  }
}

}  // namespace

LossStats ppo_loss(const NetworkWeights& w, const std::vector<EpisodeSegment>& batch,
                   const LossCoefs& coefs) {
  LossAccum acc;
  for (const EpisodeSegment& seg : batch) {
    Vec h = seg.h0;
    StepCache c;
    for (const SegmentStep& s : seg.steps) {
      forward_step(w, s.obs, h, c);
      step_loss(c, s, coefs, acc, nullptr, nullptr);
      h = c.h;
    }
  }
  LossStats st;
  st.n_steps = acc.n;
  if (acc.n == 0) return st;
  const double inv = 1.0 / static_cast<double>(acc.n);
  st.policy = acc.policy * inv;
  st.value = coefs.value_coef * acc.value * inv;
  st.entropy = acc.entropy * inv;
  st.total = st.policy + st.value - coefs.entropy_coef * st.entropy;
  st.clip_fraction = static_cast<double>(acc.clipped) * inv;
  st.approx_kl = acc.kl * inv;
  return st;
}

LossStats ppo_loss_backward(const NetworkWeights& w,
                            const std::vector<EpisodeSegment>& batch,
                            const LossCoefs& coefs, NetworkWeights& grad) {
  grad = make_zero_weights(w.config);
  long n_total = 0;
  for (const EpisodeSegment& seg : batch) n_total += static_cast<long>(seg.steps.size());
  if (n_total == 0) return {};
  const double inv = 1.0 / static_cast<double>(n_total);

  LossAccum acc;
  for (const EpisodeSegment& seg : batch) {
    const size_t T = seg.steps.size();
    std::vector<StepCache> caches(T);
    std::vector<Vec> dlogits(T);
    std::vector<double> dvalue(T);
    Vec h = seg.h0;
    for (size_t t = 0; t < T; ++t) {
      forward_step(w, seg.steps[t].obs, h, caches[t]);
      step_loss(caches[t], seg.steps[t], coefs, acc, &dlogits[t], &dvalue[t]);
      h = caches[t].h;
    }

    // Backward through time.
    Vec dh_next = Vec::Zero(w.config.layer_width);
    for (size_t ti = T; ti-- > 0;) {
      const StepCache& c = caches[ti];
      // Heads.
      const Vec dl = dlogits[ti] * inv;
      grad.logits_w += dl * c.actor_h.transpose();
      grad.logits_b += dl;
      Vec da = (w.logits_w.transpose() * dl)
                   .cwiseProduct(Vec::Ones(c.actor_h.size()) -
                                 c.actor_h.cwiseProduct(c.actor_h));
      grad.actor_w += da * c.h.transpose();
      grad.actor_b += da;

      const double dv = dvalue[ti] * inv;
      grad.value_w += dv * c.critic_h.transpose();
      grad.value_b(0) += dv;
      Vec dc = (w.value_w.transpose() * dv)
                   .cwiseProduct(Vec::Ones(c.critic_h.size()) -
                                 c.critic_h.cwiseProduct(c.critic_h));
      grad.critic_w += dc * c.h.transpose();
      grad.critic_b += dc;

      Vec dh = dh_next + w.actor_w.transpose() * da +
               w.critic_w.transpose() * dc;

      // GRU: h = (1 - z) .* n + z .* h_prev
      const Vec ones = Vec::Ones(dh.size());
      Vec dz = dh.cwiseProduct(c.h_prev - c.n);
      Vec dn = dh.cwiseProduct(ones - c.z);
      Vec dh_prev = dh.cwiseProduct(c.z);

      Vec dan = dn.cwiseProduct(ones - c.n.cwiseProduct(c.n));
      Vec dr = dan.cwiseProduct(c.g);
      Vec dg = dan.cwiseProduct(c.r);
      dh_prev += w.gru_un.transpose() * dg;

      Vec daz = dz.cwiseProduct(c.z.cwiseProduct(ones - c.z));
      Vec dar = dr.cwiseProduct(c.r.cwiseProduct(ones - c.r));
      dh_prev += w.gru_uz.transpose() * daz + w.gru_ur.transpose() * dar;

      const Vec& x = c.ff.empty() ? seg.steps[ti].obs : c.ff.back();
      grad.gru_wz += daz * x.transpose();
      grad.gru_uz += daz * c.h_prev.transpose();
      grad.gru_bz += daz;
      grad.gru_wr += dar * x.transpose();
      grad.gru_ur += dar * c.h_prev.transpose();
      grad.gru_br += dar;
      grad.gru_wn += dan * x.transpose();
      grad.gru_un += dg * c.h_prev.transpose();
      grad.gru_bn += dan;

      Vec dx = w.gru_wz.transpose() * daz + w.gru_wr.transpose() * dar +
               w.gru_wn.transpose() * dan;

      // Shared feed-forward stack.
      for (size_t li = c.ff.size(); li-- > 0;) {
        const Vec& act = c.ff[li];
        Vec dpre = dx.cwiseProduct(Vec::Ones(act.size()) -
                                   act.cwiseProduct(act));
        const Vec& in = (li == 0) ? seg.steps[ti].obs : c.ff[li - 1];
        grad.ff_w[li] += dpre * in.transpose();
        grad.ff_b[li] += dpre;
        dx = w.ff_w[li].transpose() * dpre;
      }

      dh_next = dh_prev;
    }
  }

  LossStats st;
  st.n_steps = acc.n;
  const double m = 1.0 / static_cast<double>(acc.n);
  st.policy = acc.policy * m;
  st.value = coefs.value_coef * acc.value * m;
  st.entropy = acc.entropy * m;
  st.total = st.policy + st.value - coefs.entropy_coef * st.entropy;
  st.clip_fraction = static_cast<double>(acc.clipped) * m;
  st.approx_kl = acc.kl * m;
  if (!std::isfinite(st.total)) {
    throw std::runtime_error("ppo_loss_backward: non-finite loss");
  }
  return st;
}

}  // namespace navrep
