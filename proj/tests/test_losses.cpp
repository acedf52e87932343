#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "signrec/losses.hpp"
#include "signrec/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace signrec;

namespace {

constexpr Index kM = 4, kN = 5, kD = 3;

FinalEmbeddings<double> random_finals(Rng& rng) {
  FinalEmbeddings<double> f;
  f.pos_user = Matrix<double>(kM, kD);
  f.pos_item = Matrix<double>(kN, kD);
  f.neg_user = Matrix<double>(kM, kD);
  f.neg_item = Matrix<double>(kN, kD);
  for (auto* m : {&f.pos_user, &f.pos_item, &f.neg_user, &f.neg_item}) {
    for (std::size_t k = 0; k < m->size(); ++k) m->data()[k] = rng.uniform(-1.0, 1.0);
  }
  return f;
}

TrainingBatch fixed_batch() {
  TrainingBatch b;
  b.edges = {{0, 0, 5.0, +1}, {1, 1, 4.0, +1}, {2, 0, 1.0, -1}, {2, 3, 2.0, -1}};
  b.triples = {{0, 0, 4, +1}, {1, 1, 3, +1}, {2, 0, 2, -1}, {2, 3, 1, -1}};
  return b;
}

std::vector<double> flatten(const FinalEmbeddings<double>& f) {
  std::vector<double> theta;
  for (const auto* m : {&f.pos_user, &f.pos_item, &f.neg_user, &f.neg_item}) {
    theta.insert(theta.end(), m->data(), m->data() + m->size());
  }
  return theta;
}

FinalEmbeddings<double> unflatten(const std::vector<double>& theta) {
  FinalEmbeddings<double> f;
  f.pos_user = Matrix<double>(kM, kD);
  f.pos_item = Matrix<double>(kN, kD);
  f.neg_user = Matrix<double>(kM, kD);
  f.neg_item = Matrix<double>(kN, kD);
  std::size_t k = 0;
  for (auto* m : {&f.pos_user, &f.pos_item, &f.neg_user, &f.neg_item}) {
    for (std::size_t j = 0; j < m->size(); ++j) m->data()[j] = theta[k++];
  }
  return f;
}

std::vector<double> flatten_grads(const FinalGradients<double>& g) {
  std::vector<double> out;
  for (const auto* m : {&g.pos_user, &g.pos_item, &g.neg_user, &g.neg_item}) {
    out.insert(out.end(), m->data(), m->data() + m->size());
  }
  return out;
}

void compare_grads(const std::vector<double>& analytic, const std::vector<double>& numeric,
                   double tol) {
  REQUIRE(analytic.size() == numeric.size());
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    CAPTURE(k);
    CHECK(std::abs(analytic[k] - numeric[k]) <= tol * (1.0 + std::abs(numeric[k])));
  }
}

}  // namespace

TEST_CASE("positive ranking loss value matches the closed form") {
  FinalEmbeddings<double> f;
  f.pos_user = Matrix<double>(1, 1);
  f.pos_item = Matrix<double>(3, 1);
  f.neg_user = Matrix<double>(1, 1);
  f.neg_item = Matrix<double>(3, 1);
  f.pos_user(0, 0) = 2.0;
  f.pos_item(0, 0) = 1.5;   // observed
  f.pos_item(1, 0) = -0.5;  // unobserved
  f.pos_item(2, 0) = 0.25;

  FinalGradients<double> g;
  g.init(1, 3, 1);

  TrainingBatch b;
  b.triples = {{0, 0, 1, +1}};
  // x = c1 * (2 * 1.5) - (2 * -0.5) = 1.5 * 3 + 1 = 5.5
  const double expected_pos = std::log(1.0 + std::exp(-5.5));
  CHECK(bpr_positive(b, f, 1.5, g) == doctest::Approx(expected_pos).epsilon(1e-12));

  // Negatively signed observation drops the confidence factor.
  b.triples = {{0, 0, 2, -1}};
  // x = 3 - 0.5
  const double expected_neg_sign = std::log(1.0 + std::exp(-2.5));
  CHECK(bpr_positive(b, f, 1.5, g) == doctest::Approx(expected_neg_sign).epsilon(1e-12));
}

TEST_CASE("negative ranking loss value matches the closed form") {
  FinalEmbeddings<double> f;
  f.pos_user = Matrix<double>(1, 1);
  f.pos_item = Matrix<double>(2, 1);
  f.neg_user = Matrix<double>(1, 1);
  f.neg_item = Matrix<double>(2, 1);
  f.neg_user(0, 0) = 1.0;
  f.neg_item(0, 0) = 0.8;  // observed, disliked
  f.neg_item(1, 0) = 2.0;  // unobserved

  FinalGradients<double> g;
  g.init(1, 2, 1);

  TrainingBatch b;
  b.triples = {{0, 0, 1, -1}};
  // x = y_uj - c2 * y_ui = 2.0 - 2.0 * 0.8 = 0.4
  CHECK(bpr_negative(b, f, 2.0, g) ==
        doctest::Approx(std::log(1.0 + std::exp(-0.4))).epsilon(1e-12));

  b.triples = {{0, 0, 1, +1}};
  // positively signed observation: coefficient 1, x = 2.0 - 0.8
  CHECK(bpr_negative(b, f, 2.0, g) ==
        doctest::Approx(std::log(1.0 + std::exp(-1.2))).epsilon(1e-12));
}

TEST_CASE("ranking losses match central differences") {
  Rng rng(41);
  const auto base = random_finals(rng);
  const auto batch = fixed_batch();
  const auto theta0 = flatten(base);

  SUBCASE("positive channel") {
    const auto loss_fn = [&](const std::vector<double>& theta) {
      const auto f = unflatten(theta);
      FinalGradients<double> g;
      g.init(kM, kN, kD);
      return bpr_positive(batch, f, 1.5, g);
    };
    FinalGradients<double> g;
    g.init(kM, kN, kD);
    bpr_positive(batch, base, 1.5, g);
    compare_grads(flatten_grads(g), testsup::numeric_gradient(loss_fn, theta0), 1e-6);
  }

  SUBCASE("negative channel") {
    const auto loss_fn = [&](const std::vector<double>& theta) {
      const auto f = unflatten(theta);
      FinalGradients<double> g;
      g.init(kM, kN, kD);
      return bpr_negative(batch, f, 1.5, g);
    };
    FinalGradients<double> g;
    g.init(kM, kN, kD);
    bpr_negative(batch, base, 1.5, g);
    compare_grads(flatten_grads(g), testsup::numeric_gradient(loss_fn, theta0), 1e-6);
  }
}

TEST_CASE("rating head value and gradients check out") {
  Rng rng(43);
  const auto base = random_finals(rng);
  const auto batch = fixed_batch();
  const Index d2 = 2 * kD;

  Matrix<double> w1(d2, d2), w2(d2, 1);
  for (std::size_t k = 0; k < w1.size(); ++k) w1.data()[k] = rng.uniform(-0.5, 0.5);
  for (std::size_t k = 0; k < w2.size(); ++k) w2.data()[k] = rng.uniform(-0.5, 0.5);

  // Value against an independent dense evaluation.
  double expected = 0.0;
  for (const auto& e : batch.edges) {
    std::vector<double> cat(d2);
    for (Index c = 0; c < kD; ++c) {
      cat[c] = base.pos_user(e.user, c);
      cat[c + kD] = base.pos_item(e.item, c);
    }
    double pred = 0.0;
    for (Index q = 0; q < d2; ++q) {
      double z = 0.0;
      for (Index p = 0; p < d2; ++p) z += cat[p] * w1(p, q);
      pred += std::max(z, 0.0) * w2(q, 0);
    }
    expected += (pred - e.rating) * (pred - e.rating);
  }
  expected /= double(batch.edges.size());

  FinalGradients<double> g;
  g.init(kM, kN, kD);
  Matrix<double> w1g(d2, d2), w2g(d2, 1);
  const double got = mse_rating(batch, base, w1, w2, g, w1g, w2g);
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));

  // Gradients of embeddings and both weight matrices via one flat theta.
  const auto pack = [&](const FinalEmbeddings<double>& f, const Matrix<double>& a,
                        const Matrix<double>& b) {
    auto theta = flatten(f);
    theta.insert(theta.end(), a.data(), a.data() + a.size());
    theta.insert(theta.end(), b.data(), b.data() + b.size());
    return theta;
  };
  const auto loss_fn = [&](const std::vector<double>& theta) {
    const auto f = unflatten(theta);
    Matrix<double> a(d2, d2), b(d2, 1);
    std::size_t k = theta.size() - a.size() - b.size();
    for (std::size_t j = 0; j < a.size(); ++j) a.data()[j] = theta[k++];
    for (std::size_t j = 0; j < b.size(); ++j) b.data()[j] = theta[k++];
    FinalGradients<double> gg;
    gg.init(kM, kN, kD);
    Matrix<double> ag(d2, d2), bg(d2, 1);
    return mse_rating(batch, f, a, b, gg, ag, bg);
  };
  auto analytic = flatten_grads(g);
  analytic.insert(analytic.end(), w1g.data(), w1g.data() + w1g.size());
  analytic.insert(analytic.end(), w2g.data(), w2g.data() + w2g.size());
  compare_grads(analytic, testsup::numeric_gradient(loss_fn, pack(base, w1, w2)), 2e-5);
}

TEST_CASE("rating head validates weight shapes") {
  Rng rng(44);
  const auto base = random_finals(rng);
  const auto batch = fixed_batch();
  Matrix<double> w1_bad(2 * kD, kD), w2(2 * kD, 1), w1(2 * kD, 2 * kD);
  FinalGradients<double> g;
  g.init(kM, kN, kD);
  Matrix<double> w1g(2 * kD, 2 * kD), w2g(2 * kD, 1);
  CHECK_THROWS_AS(mse_rating(batch, base, w1_bad, w2, g, w1g, w2g), ValidationError);
}

TEST_CASE("channel decorrelation value and gradients check out") {
  Rng rng(47);
  const auto base = random_finals(rng);

  double expected = 0.0;
  for (Index u = 0; u < kM; ++u) {
    double t = 0.0;
    for (Index c = 0; c < kD; ++c) t += base.pos_user(u, c) * base.neg_user(u, c);
    expected += t * t / double(kM);
  }
  for (Index i = 0; i < kN; ++i) {
    double t = 0.0;
    for (Index c = 0; c < kD; ++c) t += base.pos_item(i, c) * base.neg_item(i, c);
    expected += t * t / double(kN);
  }

  FinalGradients<double> g;
  g.init(kM, kN, kD);
  CHECK(orthogonality(base, g) == doctest::Approx(expected).epsilon(1e-12));

  const auto loss_fn = [&](const std::vector<double>& theta) {
    const auto f = unflatten(theta);
    FinalGradients<double> gg;
    gg.init(kM, kN, kD);
    return orthogonality(f, gg);
  };
  compare_grads(flatten_grads(g), testsup::numeric_gradient(loss_fn, flatten(base)), 1e-7);
}

TEST_CASE("ranking losses stay finite under extreme scores") {
  FinalEmbeddings<double> f;
  f.pos_user = Matrix<double>(1, 1);
  f.pos_item = Matrix<double>(2, 1);
  f.neg_user = Matrix<double>(1, 1);
  f.neg_item = Matrix<double>(2, 1);
  FinalGradients<double> g;
  g.init(1, 2, 1);
  TrainingBatch b;
  b.triples = {{0, 0, 1, +1}};

  for (const double big : {500.0, -500.0}) {
    f.pos_user(0, 0) = big;
    f.pos_item(0, 0) = 1.0;
    f.pos_item(1, 0) = -1.0;
    f.neg_user(0, 0) = big;
    f.neg_item(0, 0) = 1.0;
    f.neg_item(1, 0) = -1.0;
    g.clear();
    const double lp = bpr_positive(b, f, 1.5, g);
    const double ln = bpr_negative(b, f, 1.5, g);
    CHECK(std::isfinite(lp));
    CHECK(std::isfinite(ln));
    CHECK(lp >= 0.0);
    CHECK(ln >= 0.0);
    for (const auto& x : flatten_grads(g)) CHECK(std::isfinite(x));
  }
}

TEST_CASE("batch sampling is uniform over edges and avoids seen items") {
  const auto g = testsup::small_graph();
  Rng rng(53);
  std::map<std::pair<Index, Index>, int> counts;
  const int rounds = 1000, batch = 9;
  for (int r = 0; r < rounds; ++r) {
    const auto b = sample_batch(g, batch, 2, rng);
    REQUIRE(b.edges.size() == std::size_t(batch));
    REQUIRE(b.triples.size() == std::size_t(batch) * 2);
    for (const auto& e : b.edges) ++counts[{e.user, e.item}];
    for (const auto& t : b.triples) {
      CHECK_FALSE(g.interacted(t.user, t.unobserved));
      CHECK(g.interacted(t.user, t.observed));
    }
    for (std::size_t k = 0; k < b.edges.size(); ++k) {
      CHECK(b.triples[2 * k].observed == b.edges[k].item);
      CHECK(b.triples[2 * k].sign == b.edges[k].sign);
    }
  }
  // 9 edges, 9000 draws: each should land near 1000.
  REQUIRE(counts.size() == 9);
  for (const auto& [key, c] : counts) {
    CHECK(c > 700);
    CHECK(c < 1300);
  }
}

TEST_CASE("batch sampling is deterministic per seed") {
  const auto g = testsup::small_graph();
  Rng a(99), b(99), c(100);
  const auto ba = sample_batch(g, 16, 1, a);
  const auto bb = sample_batch(g, 16, 1, b);
  const auto bc = sample_batch(g, 16, 1, c);
  REQUIRE(ba.triples.size() == bb.triples.size());
  bool all_same = true, any_diff = false;
  for (std::size_t k = 0; k < ba.triples.size(); ++k) {
    all_same = all_same && ba.triples[k].user == bb.triples[k].user &&
               ba.triples[k].observed == bb.triples[k].observed &&
               ba.triples[k].unobserved == bb.triples[k].unobserved;
    any_diff = any_diff || ba.triples[k].user != bc.triples[k].user ||
               ba.triples[k].unobserved != bc.triples[k].unobserved;
  }
  CHECK(all_same);
  CHECK(any_diff);
}

TEST_CASE("sampling rejects saturated graphs and bad arguments") {
  // Single user who interacted with both items: no negatives exist.
  const auto g = SignedBipartiteGraph::build(1, 2, {{0, 0, 5.0}}, {{0, 1, 1.0}});
  Rng rng(1);
  CHECK_THROWS_AS(sample_batch(g, 4, 1, rng), ValidationError);

  const auto ok = testsup::small_graph();
  CHECK_THROWS_AS(sample_batch(ok, 0, 1, rng), ValidationError);
  CHECK_THROWS_AS(sample_batch(ok, 4, 0, rng), ValidationError);
}
