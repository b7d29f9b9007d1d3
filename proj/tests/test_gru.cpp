#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/gru.hpp"

using namespace smf;

namespace {

// Test-local scalar reimplementation of the cell, kept independent of the
// library's vector kernels.
struct ScalarGru {
  std::vector<std::vector<double>> wr, ur, wz, uz, wn, un;
  std::vector<double> br, bz, bn;

  static double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  std::vector<double> step(const std::vector<double>& x, const std::vector<double>& h) const {
    std::size_t hidden = br.size();
    std::vector<double> r(hidden), z(hidden), n(hidden), out(hidden);
    for (std::size_t i = 0; i < hidden; ++i) {
      double ar = br[i], az = bz[i];
      for (std::size_t j = 0; j < x.size(); ++j) {
        ar += wr[i][j] * x[j];
        az += wz[i][j] * x[j];
      }
      for (std::size_t j = 0; j < hidden; ++j) {
        ar += ur[i][j] * h[j];
        az += uz[i][j] * h[j];
      }
      r[i] = sig(ar);
      z[i] = sig(az);
    }
    for (std::size_t i = 0; i < hidden; ++i) {
      double an = bn[i];
      for (std::size_t j = 0; j < x.size(); ++j) an += wn[i][j] * x[j];
      for (std::size_t j = 0; j < hidden; ++j) an += un[i][j] * (r[j] * h[j]);
      n[i] = std::tanh(an);
      out[i] = (1.0 - z[i]) * n[i] + z[i] * h[i];
    }
    return out;
  }
};

ParamSet make_gru_params(std::size_t hidden, std::size_t input, std::uint64_t seed,
                         const std::string& prefix = "g") {
  ParamSet params;
  for (const char* gate : {"reset", "update", "cand"}) {
    params.add(prefix + "." + gate + ".W", Tensor({hidden, input}));
    params.add(prefix + "." + gate + ".U", Tensor({hidden, hidden}));
    params.add(prefix + "." + gate + ".b", Tensor({hidden}));
  }
  Rng rng(seed);
  init_uniform_fan_in(params, rng);
  // Non-zero biases give the oracle something to disagree about.
  for (const char* gate : {"reset", "update", "cand"}) {
    Tensor& b = params.at(prefix + "." + gate + ".b");
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng.uniform(-0.5, 0.5);
  }
  return params;
}

ScalarGru to_scalar(const ParamSet& params, const std::string& prefix = "g") {
  GruParams p = GruParams::view(params, prefix);
  std::size_t hidden = p.hidden(), input = p.input();
  ScalarGru s;
  auto mat = [&](const Tensor& t, std::size_t cols) {
    std::vector<std::vector<double>> m(t.rows(), std::vector<double>(cols));
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = t.at(i, j);
    }
    return m;
  };
  s.wr = mat(*p.w_reset, input);
  s.ur = mat(*p.u_reset, hidden);
  s.wz = mat(*p.w_update, input);
  s.uz = mat(*p.u_update, hidden);
  s.wn = mat(*p.w_cand, input);
  s.un = mat(*p.u_cand, hidden);
  s.br = p.b_reset->values();
  s.bz = p.b_update->values();
  s.bn = p.b_cand->values();
  return s;
}

}  // namespace

TEST_CASE("gru_step zero parameters, zero hidden: fixed point") {
  ParamSet params;
  for (const char* gate : {"reset", "update", "cand"}) {
    params.add(std::string("g.") + gate + ".W", Tensor({3, 2}));
    params.add(std::string("g.") + gate + ".U", Tensor({3, 3}));
    params.add(std::string("g.") + gate + ".b", Tensor({3}));
  }
  GruParams p = GruParams::view(params, "g");
  Vec h = gru_step(p, {1.0, -2.0}, {0.0, 0.0, 0.0});
  CHECK(h == Vec{0, 0, 0});
}

TEST_CASE("gru_step saturated update gate carries the state") {
  ParamSet params = make_gru_params(3, 2, 5);
  params.at("g.update.b").fill(20.0);  // z ~= 1
  GruParams p = GruParams::view(params, "g");
  Vec h_prev = {0.3, -0.7, 0.9};
  Vec h = gru_step(p, {1.0, 1.0}, h_prev);
  for (std::size_t i = 0; i < 3; ++i) CHECK(h[i] == doctest::Approx(h_prev[i]).epsilon(1e-8));
}

TEST_CASE("gru_step matches the scalar oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ParamSet params = make_gru_params(2, 2, seed);
    ScalarGru oracle = to_scalar(params);
    GruParams p = GruParams::view(params, "g");
    Rng rng(seed + 100);
    Vec x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Vec h = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Vec got = gru_step(p, x, h);
    std::vector<double> want = oracle.step(x, h);
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("encoder with zero parameters gives a zero embedding") {
  ParamSet params;
  for (const char* gate : {"reset", "update", "cand"}) {
    params.add(std::string("g.") + gate + ".W", Tensor({3, 4}));
    params.add(std::string("g.") + gate + ".U", Tensor({3, 3}));
    params.add(std::string("g.") + gate + ".b", Tensor({3}));
  }
  GruParams p = GruParams::view(params, "g");
  OffsetSequence offsets;
  offsets.joints = 2;
  offsets.dims = 2;
  offsets.deltas = {{1, 2, 3, 4}, {-1, 0, 1, 0}};
  CHECK(encode_person(offsets, p) == Vec{0, 0, 0});
}

TEST_CASE("encoder folds gru_step") {
  ParamSet params = make_gru_params(3, 2, 9);
  GruParams p = GruParams::view(params, "g");

  // Single step equals one gru_step from zero hidden.
  std::vector<Vec> one = {{0.4, -0.2}};
  CHECK(encode_steps(one, p) == gru_step(p, one[0], Vec(3, 0.0)));

  // Two steps match the scalar oracle composed twice.
  ScalarGru oracle = to_scalar(params);
  std::vector<Vec> two = {{0.4, -0.2}, {-0.1, 0.9}};
  Vec got = encode_steps(two, p);
  std::vector<double> want = oracle.step(two[1], oracle.step(two[0], {0, 0, 0}));
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(encode_steps({}, p), Error);
}

TEST_CASE("hidden states stay inside (-1, 1) after one step from zero") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ParamSet params = make_gru_params(4, 3, seed);
    GruParams p = GruParams::view(params, "g");
    Rng rng(seed * 13);
    Vec h(4, 0.0);
    for (int t = 0; t < 20; ++t) {
      Vec x = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
      h = gru_step(p, x, h);
      for (double v : h) {
        CHECK(v > -1.0);
        CHECK(v < 1.0);
      }
    }
  }
}

TEST_CASE("decoder with zero parameters emits zero offsets") {
  ParamSet params;
  for (const char* gate : {"reset", "update", "cand"}) {
    params.add(std::string("g.") + gate + ".W", Tensor({4, 2}));
    params.add(std::string("g.") + gate + ".U", Tensor({4, 4}));
    params.add(std::string("g.") + gate + ".b", Tensor({4}));
  }
  Tensor w_out({2, 4}), b_out({2});
  GruParams p = GruParams::view(params, "g");
  Vec init = {0.5, -0.5, 0.25, 0.0};  // non-zero conditioning
  std::vector<Vec> out = decode_offsets(init, {1.0, -1.0}, 3, p, w_out, b_out);
  REQUIRE(out.size() == 3);
  for (const Vec& o : out) CHECK(o == Vec{0, 0});
}

TEST_CASE("decoder single step is one gru_step plus a projection") {
  ParamSet params = make_gru_params(3, 2, 21);
  GruParams p = GruParams::view(params, "g");
  Rng rng(77);
  Tensor w_out({2, 3}), b_out({2});
  for (std::size_t i = 0; i < w_out.size(); ++i) w_out[i] = rng.uniform(-1, 1);
  for (std::size_t i = 0; i < b_out.size(); ++i) b_out[i] = rng.uniform(-1, 1);

  Vec init = {0.1, 0.2, -0.3};
  Vec seed_offset = {0.4, -0.4};
  std::vector<Vec> out = decode_offsets(init, seed_offset, 1, p, w_out, b_out);

  Vec h = gru_step(p, seed_offset, init);
  Vec want = b_out.values();
  matvec_acc(w_out, h, want);
  CHECK(out.size() == 1);
  CHECK(out[0] == want);
}

TEST_CASE("two-step decoding matches a hand-unrolled oracle") {
  ParamSet params = make_gru_params(2, 2, 33);
  ScalarGru oracle = to_scalar(params);
  GruParams p = GruParams::view(params, "g");
  Rng rng(34);
  Tensor w_out({2, 2}), b_out({2});
  for (std::size_t i = 0; i < w_out.size(); ++i) w_out[i] = rng.uniform(-1, 1);
  for (std::size_t i = 0; i < b_out.size(); ++i) b_out[i] = rng.uniform(-1, 1);

  Vec init = {0.3, -0.6};
  Vec seed_offset = {0.2, 0.1};
  std::vector<Vec> got = decode_offsets(init, seed_offset, 2, p, w_out, b_out);

  auto project = [&](const std::vector<double>& h) {
    std::vector<double> y = {b_out[0], b_out[1]};
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) y[i] += w_out.at(i, j) * h[j];
    }
    return y;
  };
  std::vector<double> h1 = oracle.step(seed_offset, init);
  std::vector<double> y1 = project(h1);
  std::vector<double> h2 = oracle.step(y1, h1);  // prediction fed back
  std::vector<double> y2 = project(h2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(got[0][i] == doctest::Approx(y1[i]).epsilon(1e-12));
    CHECK(got[1][i] == doctest::Approx(y2[i]).epsilon(1e-12));
  }
}

TEST_CASE("decoding is deterministic") {
  ParamSet params = make_gru_params(3, 2, 55);
  GruParams p = GruParams::view(params, "g");
  Tensor w_out({2, 3}), b_out({2});
  Rng rng(56);
  for (std::size_t i = 0; i < w_out.size(); ++i) w_out[i] = rng.uniform(-1, 1);
  Vec init = {0.1, -0.1, 0.2};
  auto a = decode_offsets(init, {0.3, 0.3}, 4, p, w_out, b_out);
  auto b = decode_offsets(init, {0.3, 0.3}, 4, p, w_out, b_out);
  CHECK(a == b);
}

TEST_CASE("gru backward matches finite differences through encode and decode") {
  // Loss: squared norm of all decoded offsets after encoding a short sequence.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ParamSet params = make_gru_params(3, 2, seed, "enc");
    ParamSet dec = make_gru_params(3, 2, seed + 50, "dec");
    for (const std::string& name : dec.names()) params.add(name, dec.at(name));
    Rng rng(seed + 200);
    Tensor w_out({2, 3}), b_out({2});
    for (std::size_t i = 0; i < w_out.size(); ++i) w_out[i] = rng.uniform(-1, 1);
    for (std::size_t i = 0; i < b_out.size(); ++i) b_out[i] = rng.uniform(-0.2, 0.2);
    params.add("out.W", w_out);
    params.add("out.b", b_out);

    std::vector<Vec> inputs = {{0.5, -0.5}, {0.25, 0.75}, {-0.5, 0.1}};

    auto loss_fn = [&](const ParamSet& ps) {
      GruParams pe = GruParams::view(ps, "enc");
      GruParams pd = GruParams::view(ps, "dec");
      Vec h = encode_steps(inputs, pe);
      auto outs = decode_offsets(h, inputs.back(), 3, pd, ps.at("out.W"), ps.at("out.b"));
      double loss = 0.0;
      for (const Vec& o : outs) {
        for (double v : o) loss += v * v;
      }
      return loss;
    };

    // Analytic gradients.
    ParamSet grads = params.zeros_like();
    {
      GruParams pe = GruParams::view(params, "enc");
      GruParams pd = GruParams::view(params, "dec");
      std::vector<GruStepCache> enc_caches;
      Vec h = encode_steps(inputs, pe, &enc_caches);
      DecodeCache dcache;
      auto outs = decode_offsets(h, inputs.back(), 3, pd, params.at("out.W"), params.at("out.b"),
                                 &dcache);
      std::vector<Vec> d_outputs(outs.size());
      for (std::size_t t = 0; t < outs.size(); ++t) {
        d_outputs[t].resize(outs[t].size());
        for (std::size_t i = 0; i < outs[t].size(); ++i) d_outputs[t][i] = 2.0 * outs[t][i];
      }
      GruGrads ge = GruGrads::view(grads, "enc");
      GruGrads gd = GruGrads::view(grads, "dec");
      Vec d_init = decode_backward(pd, params.at("out.W"), params.at("out.b"), dcache, d_outputs,
                                   gd, grads.at("out.W"), grads.at("out.b"));
      encode_backward(pe, enc_caches, d_init, ge);
    }

    ParamSet numeric = finite_diff_grad(loss_fn, params, 1e-5);
    for (const std::string& name : params.names()) {
      const Tensor& a = grads.at(name);
      const Tensor& n = numeric.at(name);
      for (std::size_t i = 0; i < a.size(); ++i) {
        double denom = std::max({std::abs(a[i]), std::abs(n[i]), 1e-8});
        CHECK(std::abs(a[i] - n[i]) / denom <= 1e-4);
      }
    }
  }
}
