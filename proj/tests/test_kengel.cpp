#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "engelkit/error.hpp"
#include "engelkit/kengel.hpp"
#include "engelkit/normalize.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace engelkit;
using fixture::field;
using fixture::one_form;
using fixture::scalar;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<VectorField> frame(const EngelData& d) { return {d.W, d.X, d.T, d.R}; }

bool all_exact(const std::vector<NamedVerdict>& vs) {
  for (const auto& v : vs)
    if (v.verdict.kind != ZeroKind::ExactZero) {
      UNSCOPED_INFO(v.name << " is " << to_string(v.verdict.kind));
      return false;
    }
  return true;
}

void report_failures(const std::vector<NamedVerdict>& vs) {
  for (const auto& v : vs)
    if (!v.verdict.holds()) UNSCOPED_INFO(v.name << " fails");
}

// Round 3-sphere: left-invariant frame with [A,B] = -2C and cyclic.
Space s3() {
  return FrameSpace::Builder()
      .lie("A", "a")
      .lie("B", "b")
      .lie("C", "c")
      .bracket("A", "B", {{"C", -2}})
      .bracket("B", "C", {{"A", -2}})
      .bracket("C", "A", {{"B", -2}})
      .build();
}

Space chart3() {
  return FrameSpace::Builder()
      .coordinate("x", {0, 1, false})
      .coordinate("y", {0, 1, false})
      .coordinate("z", {0, 1, false})
      .build();
}

EngelData torus_data(const fixture::Torus& tor) {
  auto s = make_sampler(tor.space);
  return make_engel_data(tor.alpha, tor.beta, tor.W, tor.X, s);
}

LatticeSpec lattice(const std::vector<std::pair<std::string, long>>& gens,
                    const std::array<std::array<const char*, 4>, 4>& rows) {
  LatticeSpec l;
  l.generators = gens;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) l.vectors[i][j] = parse_surd(rows[i][j], gens);
  return l;
}

// Orbit-closure dimension of the line through c in R^4 / Z^4: four minus the
// rank of the integer relations k . c = 0, searched over a small box.
int relation_rank_oracle(const std::array<double, 4>& c) {
  std::vector<std::array<double, 4>> relations;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int d = -2; d <= 2; ++d)
        for (int e = -2; e <= 2; ++e) {
          std::array<double, 4> k{double(a), double(b), double(d), double(e)};
          if (a == 0 && b == 0 && d == 0 && e == 0) continue;
          if (std::abs(k[0] * c[0] + k[1] * c[1] + k[2] * c[2] + k[3] * c[3]) < 1e-9) relations.push_back(k);
        }
  int rank = 0;
  for (std::size_t col = 0; col < 4 && static_cast<std::size_t>(rank) < relations.size(); ++col) {
    auto pr = static_cast<std::size_t>(rank);
    std::size_t best = pr;
    for (std::size_t i = pr; i < relations.size(); ++i)
      if (std::abs(relations[i][col]) > std::abs(relations[best][col])) best = i;
    if (std::abs(relations[best][col]) < 1e-9) continue;
    std::swap(relations[best], relations[pr]);
    for (std::size_t i = 0; i < relations.size(); ++i) {
      if (i == pr) continue;
      double f = relations[i][col] / relations[pr][col];
      for (std::size_t j = 0; j < 4; ++j) relations[i][j] -= f * relations[pr][j];
    }
    ++rank;
  }
  return 4 - rank;
}

}  // namespace

TEST_CASE("kengel_check on the torus and Nil4", "[kengel]") {
  fixture::Torus tor;
  auto s = make_sampler(tor.space);
  EngelData d = torus_data(tor);
  Metric g = orthonormal(frame(d), s);
  KEngelCheck ok = kengel_check(d, g, tor.R, s);
  CHECK(ok.holds());

  KEngelCheck bad = kengel_check(d, g, tor.X, s);
  CHECK_FALSE(all_hold(bad.engel_field));
  // [d/dt, W] is 2 pi T, so it leaves D.
  oracle::NumField dt = [](const oracle::Vec4&) { return oracle::Vec4{1, 0, 0, 0}; };
  oracle::NumField w = [](const oracle::Vec4& p) {
    return oracle::Vec4{0, std::cos(2 * kPi * p[0]), std::sin(2 * kPi * p[0]), 1};
  };
  oracle::Vec4 p{0.3, 0.1, 0.2, 0.4};
  oracle::Vec4 t_dir{0, -std::sin(2 * kPi * p[0]), std::cos(2 * kPi * p[0]), 0};
  CHECK(oracle::dot(oracle::numeric_bracket(dt, w, p), t_dir) == Catch::Approx(2 * kPi).epsilon(1e-6));

  fixture::Nil4 nil;
  auto sn = make_sampler(nil.space);
  EngelData dn = make_engel_data(nil.alpha, nil.beta, nil.A, nil.D, sn);
  KEngelCheck n = kengel_check(dn, orthonormal(frame(dn), sn), dn.R, sn);
  CHECK(all_exact(n.engel_field));
  CHECK(all_exact(n.killing));
  CHECK(all_exact(n.orthogonal));
}

TEST_CASE("kengel_framing on the torus keeps the forms", "[kengel]") {
  fixture::Torus tor;
  auto s = make_sampler(tor.space);
  EngelData d = adapt(torus_data(tor), s);
  KEngelFraming f = kengel_framing(d, orthonormal(frame(d), s), tor.R, s);
  report_failures(f.invariants);
  CHECK(f.holds());
  CHECK(zero_test(f.kdata.data.alpha - tor.alpha, s).holds());
  CHECK(zero_test(f.kdata.data.beta - tor.beta, s).holds());

  // With X = d/dt instead of the adapted d/dt / 2 pi the new beta is 2 pi beta.
  EngelData raw = torus_data(tor);
  KEngelFraming f2 = kengel_framing(raw, orthonormal(frame(raw), s), tor.R, s);
  CHECK(f2.holds());
  CHECK(zero_test(f2.kdata.data.beta - Expr::integer(2) * Expr::pi() * tor.beta, s).holds());

  CHECK_THROWS_AS(kengel_framing(raw, orthonormal(frame(raw), s), tor.X, s), PreconditionError);
}

TEST_CASE("kengel_framing on the circle-bundle prolongations", "[kengel]") {
  for (int k : {-1, 0, 1}) {
    INFO("k = " << k);
    fixture::Lorentz lor(k);
    auto s = make_sampler(lor.space, fixture::trig_policy());
    EngelData d = make_engel_data(lor.alpha, lor.beta, lor.W, lor.X, s);
    CHECK(zero_test(d.R - lor.R, s).holds());
    KEngelFraming f = kengel_framing(d, orthonormal(frame(d), s), lor.R, s);
    report_failures(f.invariants);
    CHECK(f.holds());

    fixture::Cartan car(k);
    EngelData dc = construct_forms_from_framing(car.W, car.X, s);
    VectorField reeb = field(car.space, {"0", "0", "1", std::to_string(-k)});  // C - k d/dt
    CHECK(zero_test(dc.R - reeb, s).holds());
    Metric gc = orthonormal(frame(dc), s);
    KEngelFraming fc = kengel_framing(dc, gc, reeb, s);
    report_failures(fc.invariants);
    CHECK(fc.holds());
    if (k != 0) {
      VectorField other = field(car.space, {"0", "0", "1", std::to_string(k)});  // C + k d/dt
      CHECK_FALSE(kengel_check(dc, gc, other, s).holds());
    }
  }

  fixture::Nil4 nil;
  auto sn = make_sampler(nil.space);
  EngelData dn = make_engel_data(nil.alpha, nil.beta, nil.A, nil.D, sn);
  KEngelFraming fn = kengel_framing(dn, orthonormal(frame(dn), sn), dn.R, sn);
  CHECK(all_exact(fn.invariants));
}

TEST_CASE("converse_metric builds a commuting orthonormal framing", "[kengel]") {
  fixture::Torus tor;
  auto s = make_sampler(tor.space);
  ConverseMetric cm = converse_metric(torus_data(tor), s);
  CHECK(cm.holds());
  CHECK(kengel_framing(cm.framing, cm.g, cm.framing.R, s).holds());

  fixture::Nil4 nil;
  auto sn = make_sampler(nil.space);
  ConverseMetric cn = converse_metric(make_engel_data(nil.alpha, nil.beta, nil.A, nil.D, sn), sn);
  CHECK(all_exact(cn.conditions));
  CHECK(all_exact(cn.check.engel_field));
  CHECK(all_exact(cn.check.killing));
  CHECK(all_exact(cn.check.orthogonal));

  // [d/dz, d/dt + z W] = W
  VectorField skew = tor.X + Expr::coord("z") * tor.W;
  EngelData bad = make_engel_data(tor.alpha, tor.beta, tor.W, skew, s);
  CHECK_THROWS_AS(converse_metric(bad, s), PreconditionError);
}

TEST_CASE("rho_criterion agrees with the table test on a_WR and a_XR", "[kengel]") {
  fixture::Nil4 nil;
  auto sn = make_sampler(nil.space);
  EngelData dn = adapt(make_engel_data(nil.alpha, nil.beta, nil.A, nil.D, sn), sn);
  RhoReport rn = rho_criterion(dn, sn);
  CHECK(rn.criterion.kind == ZeroKind::ExactZero);
  CHECK(rn.table.kind == ZeroKind::ExactZero);
  // rho = a up to the adapted scale, and da = 0 in Nil4.
  CHECK(rn.drho_zero.kind == ZeroKind::ExactZero);

  fixture::Torus tor;
  auto s = make_sampler(tor.space);
  EngelData dt = adapt(torus_data(tor), s);
  RhoReport rt = rho_criterion(dt, s);
  CHECK(rt.criterion.holds());
  CHECK(rt.table.holds());

  // W' = exp(z) W gives rho' = exp(-z) rho and L_R rho' = -rho'.
  EngelData scaled = make_engel_data(dt.alpha, dt.beta, Expr::exp(Expr::coord("z")) * dt.W, dt.X, s);
  RhoReport rs = rho_criterion(scaled, s);
  CHECK(rs.criterion.kind == ZeroKind::Nonzero);
  CHECK(rs.table.kind == ZeroKind::Nonzero);

  // beta != -L_X alpha without the adapted X.
  CHECK_THROWS_AS(rho_criterion(torus_data(tor), s), PreconditionError);
}

TorusFamily standard_torus() {
  return torus_family(lattice({}, {{{"1", "0", "0", "0"},
                                    {"0", "1", "0", "0"},
                                    {"0", "0", "1", "0"},
                                    {"0", "0", "0", "1"}}}));
}

// The torus fixture on the chart of a torus_family result.
struct FamilyTorus {
  explicit FamilyTorus(const TorusFamily& fam) : space(fam.kdata.data.space) {}
  Space space;
  DiffForm alpha = one_form(space, {"0", "-cos(2*pi*t)", "-sin(2*pi*t)", "1"});
  VectorField X = VectorField::basis(space, 0);
  VectorField R = VectorField::basis(space, 3);
};

TEST_CASE("rank1_perturbation rescales alpha by alpha(R_i)", "[kengel]") {
  TorusFamily fam = standard_torus();
  FamilyTorus tor(fam);
  auto s = make_sampler(tor.space);
  const KEngelData& kd = fam.kdata;

  KEngelFraming same = rank1_perturbation(kd, tor.R, s);
  CHECK(same.holds());
  CHECK(zero_test(same.kdata.data.alpha - tor.alpha, s).holds());

  KEngelFraming doubled = rank1_perturbation(kd, Expr::integer(2) * tor.R, s);
  report_failures(doubled.invariants);
  CHECK(doubled.holds());
  CHECK(zero_test(doubled.kdata.data.alpha - Expr::rational(Rational(1, 2)) * tor.alpha, s).holds());

  VectorField tilted = tor.R + VectorField::basis(tor.space, 1);
  try {
    rank1_perturbation(kd, tilted, s);
    FAIL("expected DegenerateFrameError");
  } catch (const DegenerateFrameError& e) {
    // alpha(R_i) = 1 - cos(2 pi t) vanishes only at t = 0.
    double t = 0;
    for (const auto& [name, v] : e.witness().point)
      if (name == "t") t = v;
    CHECK(std::min(t, 1 - t) < 1e-3);
    CHECK(std::abs(e.witness().value) < 1e-8);
  }

  CHECK_THROWS_AS(rank1_perturbation(kd, tor.X, s), PreconditionError);
}

TEST_CASE("rank1_perturbation output passes the K-Engel verification", "[kengel][property]") {
  TorusFamily fam = standard_torus();
  FamilyTorus tor(fam);
  auto s = make_sampler(tor.space);
  for (const char* extra : {"0", "1/2", "-1/3"})
    for (const char* other : {"0", "1/4"}) {
      VectorField ri = field(tor.space, {"0", extra, other, "1"});
      INFO(to_string(ri));
      KEngelFraming f = rank1_perturbation(fam.kdata, ri, s);
      report_failures(f.invariants);
      CHECK(f.holds());
      CHECK(s.is_zero(reduce_trig(pairing(f.kdata.data.alpha, ri) - Expr::integer(1))).holds());
      // Idempotent: running it again with its own data changes nothing.
      KEngelFraming again = kengel_framing(f.kdata.data, f.kdata.g, ri, s);
      CHECK(again.holds());
      CHECK(zero_test(again.kdata.data.alpha - f.kdata.data.alpha, s).holds());
    }
}

TEST_CASE("boothby_wang on the 3-sphere", "[kengel]") {
  Space n = s3();
  auto s = make_sampler(n);
  DiffForm a = DiffForm::basis(n, 0), b = DiffForm::basis(n, 1), c = DiffForm::basis(n, 2);
  VectorField B = VectorField::basis(n, 1);

  // lambda = c, L = B: omega = i_B(c ^ 2 a ^ b) = 2 c ^ a = db.
  BoothbyWangReport r = boothby_wang(c, B, b, s);
  CHECK(r.contact.holds);
  CHECK(r.closed.kind == ZeroKind::ExactZero);
  CHECK(r.primitive.kind == ZeroKind::ExactZero);
  CHECK(r.holds());
  CHECK(r.fibre == "t");
  const Space& m = r.kdata.data.space;
  auto sm = make_sampler(m);
  DiffForm expected_alpha = DiffForm::basis(m, 3) + DiffForm::basis(m, 1);
  DiffForm expected_beta = DiffForm::basis(m, 2);
  CHECK(zero_test(r.kdata.data.alpha - expected_alpha, sm).kind == ZeroKind::ExactZero);
  CHECK(zero_test(r.kdata.data.beta - expected_beta, sm).kind == ZeroKind::ExactZero);
  CHECK(all_exact(r.invariance));
  CHECK(all_exact(r.kengel_forms));
  CHECK(r.kdata.rank == 1);
  CHECK(all_exact(kengel_invariants(r.kdata.data, r.kdata.Z, sm)));

  // lambda = a with the same L: omega = i_B(2 a ^ b ^ c) = 2 c ^ a again.
  BoothbyWangReport ra = boothby_wang(a, B, b, s);
  CHECK(ra.holds());

  // L = A is not Legendrian for lambda = a.
  CHECK_THROWS_AS(boothby_wang(a, VectorField::basis(n, 0), b, s), PreconditionError);
}

TEST_CASE("boothby_wang preconditions on coordinate charts", "[kengel]") {
  Space n = chart3();
  auto s = make_sampler(n);
  DiffForm lambda = one_form(n, {"0", "x", "1"});
  // omega = (1 + x^2) dy ^ dz is not closed.
  VectorField L = field(n, {"1 + x^2", "0", "0"});
  CHECK_THROWS_AS(boothby_wang(lambda, L, one_form(n, {"0", "0", "0"}), s), PreconditionError);

  // Heisenberg chart, the flat circle bundle: A = d/dx, B = d/dy + x d/dz,
  // lambda = c = dz - x dy, L = A, omega = dz ^ dy = d(z dy).
  DiffForm c = one_form(n, {"0", "-x", "1"});
  VectorField A = field(n, {"1", "0", "0"});
  BoothbyWangReport r = boothby_wang(c, A, one_form(n, {"0", "z", "0"}), s);
  report_failures(r.invariance);
  CHECK(r.holds());
  CHECK_THROWS_AS(boothby_wang(c, A, one_form(n, {"0", "0", "x"}), s), PreconditionError);
}

TEST_CASE("boothby_wang output is invariant under R", "[kengel][property]") {
  Space n = s3();
  auto s = make_sampler(n);
  DiffForm a = DiffForm::basis(n, 0), b = DiffForm::basis(n, 1), c = DiffForm::basis(n, 2);
  VectorField A = VectorField::basis(n, 0), B = VectorField::basis(n, 1), C = VectorField::basis(n, 2);
  // lambda ^ d lambda = 2 a^b^c for lambda in {a, b, c}, so omega = 2 i_L(a^b^c)
  // is d of the coframe element dual to L.
  struct Case {
    DiffForm lambda;
    VectorField L;
    DiffForm primitive;
  };
  std::vector<Case> cases{{c, B, b}, {c, A, a}, {a, C, c}, {b, A, a}, {b, C, c}, {a, B, b}};
  for (const auto& k : cases) {
    BoothbyWangReport r = boothby_wang(k.lambda, k.L, k.primitive, s);
    report_failures(r.invariance);
    CHECK(r.holds());
    CHECK(all_exact(r.invariance));
  }
}

TEST_CASE("t2_bundle_condition reports which condition fails", "[kengel]") {
  Space sigma = FrameSpace::Builder().coordinate("x", {0, 1, false}).coordinate("y", {0, 1, false}).build();
  auto s = make_sampler(sigma);
  DiffForm zero1 = one_form(sigma, {"0", "0"});
  T2BundleInput in{sigma, Expr::integer(1), Expr::integer(1), zero1, zero1, one_form(sigma, {"0", "x"}),
                   1, 0, Rational(1, 2)};
  T2BundleReport r = t2_bundle_condition(in, s);
  CHECK(r.first.holds);   // N = 1 != 0
  CHECK(r.second.holds);  // N g^2 Omega = Omega
  CHECK_FALSE(r.third.holds());  // N g Omega = Omega
  CHECK_FALSE(r.data);

  in.g = Expr::integer(0);
  T2BundleReport r0 = t2_bundle_condition(in, s);
  CHECK_FALSE(r0.second.holds);
  CHECK(r0.second.min_abs == 0.0);
}

TEST_CASE("t2_bundle_condition builds K-Engel forms on a satisfying instance", "[kengel]") {
  Space sigma = FrameSpace::Builder().coordinate("x", {0, 1, false}).coordinate("y", {0, 1, false}).build();
  auto s = make_sampler(sigma);
  // f = x, g = 1, beta0 = (N x + n2) dy with n1 = 1, n2 = 0, eps = 1/2:
  // g (f N + n2) Omega + beta0 ^ df = x dx^dy + x dy^dx = 0.
  T2BundleInput in{sigma,
                   scalar(sigma, "x"),
                   Expr::integer(1),
                   one_form(sigma, {"0", "0"}),
                   one_form(sigma, {"0", "x"}),
                   one_form(sigma, {"0", "x"}),
                   1,
                   0,
                   Rational(1, 2)};
  T2BundleReport r = t2_bundle_condition(in, s);
  CHECK(r.conditions_hold());
  REQUIRE(r.data);
  report_failures(r.kengel_forms);
  CHECK(r.holds());
  CHECK(all_exact(r.kengel_forms));
  // N g Omega + beta0 ^ df = (1 - x) Omega does not vanish for non-constant f.
  CHECK_FALSE(r.third_constant_f.holds());

  // By hand: sigma = du1 + x dy - du2/2, alpha = x sigma + du2, beta = sigma + x dy.
  const Space& m = r.data->space;
  auto sm = make_sampler(m);
  DiffForm hand_sigma = one_form(m, {"0", "x", "1", "-1/2"});
  DiffForm hand_alpha = scalar(m, "x") * hand_sigma + one_form(m, {"0", "0", "0", "1"});
  DiffForm hand_beta = hand_sigma + one_form(m, {"0", "x", "0", "0"});
  CHECK(zero_test(r.data->alpha - hand_alpha, sm).kind == ZeroKind::ExactZero);
  CHECK(zero_test(r.data->beta - hand_beta, sm).kind == ZeroKind::ExactZero);
}

TEST_CASE("flat T^2-bundle forms", "[kengel]") {
  // Coordinates (x, y, u, v); a = du + (l1 x + l2 y) dv, b = dv, R = d/du.
  auto space = [] {
    return FrameSpace::Builder()
        .coordinate("x", {0, 1, false})
        .coordinate("y", {0, 1, false})
        .coordinate("u", {0, 1, true})
        .coordinate("v", {0, 2 * kPi, true})
        .build();
  };
  Space m = space();
  auto s = make_sampler(m);
  VectorField U = field(m, {"0", "0", "1", "0"});
  DiffForm beta = one_form(m, {"-sin(v)", "cos(v)", "0", "0"});
  for (auto [l1, l2] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}}) {
    INFO("lambda = (" << l1 << ", " << l2 << ")");
    std::string dv = std::to_string(l1) + "*x + " + std::to_string(l2) + "*y";
    DiffForm alpha = one_form(m, {"-cos(v)", "-sin(v)", "1", dv});
    EngelFormVerdicts e = check_engel_forms(alpha, beta, s);
    if (l1 == 0 && l2 == 0) {
      CHECK(e.holds());
      CHECK(all_hold(kengel_form_conditions(alpha, beta, s)));
      CHECK(zero_test(reeb_distribution(alpha, beta, s).R - U, s).holds());
    } else {
      // beta ^ d alpha = -(l1 cos v + l2 sin v) dx^dy^dv
      CHECK_FALSE(e.flag.holds());
    }
  }
  // The printed alpha uses dz, which is not a coordinate of this chart.
  CHECK_THROWS_AS(scalar(m, "z"), ParseError);
  // The printed beta with the corrected alpha: beta ^ d beta = 0.
  DiffForm alpha0 = one_form(m, {"-cos(v)", "-sin(v)", "1", "0"});
  DiffForm printed_beta = one_form(m, {"-sin(v)", "sin(v)", "0", "0"});
  EngelFormVerdicts p = check_engel_forms(alpha0, printed_beta, s);
  CHECK_FALSE(p.transverse.holds);
}

TEST_CASE("parse_surd reads rational combinations of generators", "[kengel]") {
  std::vector<std::pair<std::string, long>> gens{{"r2", 2}, {"r3", 3}};
  Surd v = parse_surd("1/2 - 3*r2 + r3", gens);
  CHECK(v.to_double() == Catch::Approx(0.5 - 3 * std::sqrt(2.0) + std::sqrt(3.0)));
  CHECK(v.rational_part() == Rational(1, 2));
  CHECK_THROWS_AS(parse_surd("r2*r3", gens), ParseError);
  Surd w = parse_surd("1 + r2", gens);
  Surd inv = w.inverse();
  CHECK(w * inv == Surd(Rational(1)));
  Surd x = parse_surd("r2 + r3", gens);
  CHECK(x * x.inverse() == Surd(Rational(1)));
}

TEST_CASE("torus_family rank of the R-orbit closure", "[kengel]") {
  std::vector<std::pair<std::string, long>> gens{{"r2", 2}, {"r3", 3}};
  struct Case {
    std::array<std::array<const char*, 4>, 4> rows;
    int expected;
    std::array<std::array<double, 4>, 4> numeric;
  };
  double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  std::vector<Case> cases{
      {{{{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "1"}}},
       1,
       {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}}},
      {{{{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"-r2", "0", "1", "0"}, {"0", "0", "0", "1"}}},
       2,
       {{{1, 0, 0, 0}, {0, 1, 0, 0}, {-r2, 0, 1, 0}, {0, 0, 0, 1}}}},
      {{{{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"-r2", "-r3", "1", "0"}, {"0", "0", "0", "1"}}},
       3,
       {{{1, 0, 0, 0}, {0, 1, 0, 0}, {-r2, -r3, 1, 0}, {0, 0, 0, 1}}}},
      {{{{"1", "r3", "0", "2"}, {"r2", "1", "1", "-1"}, {"0", "r2", "1", "0"}, {"0", "0", "0", "1"}}},
       0,
       {{{1, r3, 0, 2}, {r2, 1, 1, -1}, {0, r2, 1, 0}, {0, 0, 0, 1}}}},
  };
  for (const auto& k : cases) {
    TorusFamily fam = torus_family(lattice(gens, k.rows));
    // Oracle: coordinates by a float solve, rank by an integer-relation search.
    std::vector<std::vector<double>> cols(4, std::vector<double>(4));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) cols[j][i] = k.numeric[i][j];
    auto c = oracle::solve_dense(cols, {0, 0, 1, 0});
    for (std::size_t i = 0; i < 4; ++i) CHECK(fam.z_coordinates[i].to_double() == Catch::Approx(c[i]).margin(1e-12));
    int oracle_rank = relation_rank_oracle({c[0], c[1], c[2], c[3]});
    if (k.expected != 0) CHECK(oracle_rank == k.expected);
    CHECK(fam.rank == oracle_rank);
    CHECK(fam.kdata.rank == fam.rank);
  }

  CHECK_THROWS_AS(torus_family(lattice(gens, {{{"1", "0", "0", "1/2"},
                                               {"0", "1", "0", "0"},
                                               {"0", "0", "1", "0"},
                                               {"0", "0", "0", "1"}}})),
                  PreconditionError);
  CHECK_THROWS_AS(torus_family(lattice(gens, {{{"1", "0", "0", "r2"},
                                               {"0", "1", "0", "0"},
                                               {"0", "0", "1", "0"},
                                               {"0", "0", "0", "1"}}})),
                  PreconditionError);
  CHECK_THROWS_AS(torus_family(lattice(gens, {{{"1", "0", "0", "0"},
                                               {"0", "1", "0", "0"},
                                               {"0", "0", "1", "0"},
                                               {"0", "0", "1", "1"}}})),
                  PreconditionError);
  CHECK_THROWS_AS(torus_family(lattice(gens, {{{"1", "0", "0", "0"},
                                               {"r2", "0", "0", "0"},
                                               {"0", "0", "1", "0"},
                                               {"0", "0", "0", "1"}}})),
                  PreconditionError);
}

TEST_CASE("torus_family data is K-Engel", "[kengel]") {
  TorusFamily fam = standard_torus();
  auto s = make_sampler(fam.kdata.data.space);
  report_failures(kengel_invariants(fam.kdata.data, fam.kdata.Z, s));
  CHECK(all_hold(kengel_invariants(fam.kdata.data, fam.kdata.Z, s)));
  CHECK(kengel_check(fam.kdata.data, fam.kdata.g, fam.kdata.Z, s).holds());
}

TEST_CASE("filling_check on Boothby-Wang and torus data", "[kengel]") {
  Space n = s3();
  auto s = make_sampler(n);
  BoothbyWangReport bw = boothby_wang(DiffForm::basis(n, 2), VectorField::basis(n, 1), DiffForm::basis(n, 1), s);
  auto sm = make_sampler(bw.kdata.data.space);
  FillingReport f = filling_check(bw.kdata, sm);
  CHECK(f.holds());
  CHECK(f.radial == "r");
  CHECK(f.boundary.kind == ZeroKind::ExactZero);
  CHECK(f.lie.kind == ZeroKind::ExactZero);
  CHECK(f.same_distribution.kind == ZeroKind::ExactZero);
  CHECK(f.flag.kind == ZeroKind::ExactZero);
  CHECK(f.volume.kind == ZeroKind::ExactZero);
  CHECK(f.lie_factor == 2);

  TorusFamily fam = standard_torus();
  auto st = make_sampler(fam.kdata.data.space);
  FillingReport ft = filling_check(fam.kdata, st);
  CHECK(ft.holds());

  // Oracle for the factor: (1/r) d/dr of the eta coefficients at r = 1.
  const DiffForm& alpha = fam.kdata.data.alpha;
  const DiffForm& beta = fam.kdata.data.beta;
  Env p{{"t", 0.37}, {"x", 0.2}, {"y", 0.6}, {"z", 0.9}, {"r", 1.0}};
  for (int i = 0; i < 4; ++i) {
    auto mask = DiffForm::Mask{1} << i;
    Expr eta_i = beta.coefficient(mask) + Expr::coord("r") * Expr::coord("r") * alpha.coefficient(mask);
    double lie = oracle::central_difference(eta_i, p, "r");
    CHECK(lie == Catch::Approx(2 * evaluate(alpha.coefficient(mask), p)).margin(1e-6));
  }

  std::vector<std::pair<std::string, long>> gens{{"r2", 2}};
  TorusFamily rank2 = torus_family(lattice(gens, {{{"1", "0", "0", "0"},
                                                   {"0", "1", "0", "0"},
                                                   {"-r2", "0", "1", "0"},
                                                   {"0", "0", "0", "1"}}}));
  CHECK_THROWS_AS(filling_check(rank2.kdata, st), PreconditionError);
}
