#include <gtest/gtest.h>

#include <numbers>

#include "nic/generate.hpp"
#include "nic/hamiltonian.hpp"
#include "nic/random.hpp"

namespace {

using namespace nic;
constexpr double kPi = std::numbers::pi;

HermitianMatrix diag(std::vector<double> v) { return HermitianMatrix::diagonal(v); }

ChainHamiltonian random_chain(std::size_t n, std::size_t d, double lo, double hi, Rng& rng) {
  std::vector<LocalTerm> terms;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    terms.push_back({i, random_hermitian_bounded(static_cast<Eigen::Index>(d * d), lo, hi, rng)});
  }
  return ChainHamiltonian(n, d, std::move(terms));
}

// Independent route to the assembled matrix through explicit Kronecker products.
ComplexMatrix assemble_by_kron(const ChainHamiltonian& h) {
  const auto d = static_cast<Eigen::Index>(h.d());
  const auto id = [](Eigen::Index k) { return ComplexMatrix(ComplexMatrix::Identity(k, k)); };
  Eigen::Index total = 1;
  for (std::size_t k = 0; k < h.n(); ++k) total *= d;
  ComplexMatrix sum = ComplexMatrix::Zero(total, total);
  for (const auto& t : h.terms()) {
    Eigen::Index left = 1, right = 1;
    for (std::size_t k = 0; k < t.site; ++k) left *= d;
    for (std::size_t k = t.site + 2; k < h.n(); ++k) right *= d;
    sum += kron(kron(id(left), t.matrix.matrix()), id(right));
  }
  return sum;
}

TEST(ChainHamiltonian, Validation) {
  EXPECT_THROW(ChainHamiltonian(1, 2, {}), InputError);
  EXPECT_THROW(ChainHamiltonian(3, 0, {}), InputError);
  EXPECT_THROW(ChainHamiltonian(3, 2, {{2, HermitianMatrix::zero(4)}}), InputError);
  EXPECT_THROW(ChainHamiltonian(3, 2, {{0, HermitianMatrix::zero(3)}}), InputError);
  EXPECT_THROW(ChainHamiltonian(3, 2, {{0, HermitianMatrix::zero(4)}, {0, HermitianMatrix::zero(4)}}), InputError);
  EXPECT_NO_THROW(ChainHamiltonian(3, 2, {{1, HermitianMatrix::zero(4)}}));
}

TEST(HamiltonianInstance, RequiresGap) {
  ChainHamiltonian h(2, 1, {{0, diag({0.5})}});
  EXPECT_THROW(HamiltonianInstance(h, 0.5, 0.5), InputError);
  EXPECT_NO_THROW(HamiltonianInstance(h, 0.2, 0.5));
}

TEST(RescalePsd, SingleDiagonalTerm) {
  // 2 sites, d = 1 would give a 1x1 term; use d = 2 with a diagonal term of range 2.
  HamiltonianInstance inst(ChainHamiltonian(2, 2, {{0, diag({-1, 1, 1, 1})}}), -0.9, -0.5);
  const auto out = rescale_psd(inst);
  EXPECT_LT((out.hamiltonian.terms()[0].matrix.matrix() - diag({0, 1, 1, 1}).matrix()).norm(), 1e-15);
  EXPECT_NEAR(out.a, 0.05, 1e-15);
  EXPECT_NEAR(out.b, 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(out.metadata["rescale"]["scale"].get<double>(), 2.0);
}

TEST(RescalePsd, AlreadyNormalizedIsUnchanged) {
  HamiltonianInstance inst(ChainHamiltonian(2, 2, {{0, diag({0, 0.3, 0.7, 1})}}), 0.1, 0.4);
  const auto out = rescale_psd(inst);
  EXPECT_EQ(out.hamiltonian.terms()[0].matrix.matrix(), inst.hamiltonian.terms()[0].matrix.matrix());
  EXPECT_EQ(out.a, 0.1);
  EXPECT_EQ(out.b, 0.4);
}

TEST(RescalePsd, GroundEnergyFollowsAffineMap) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng = make_rng(seed);
    HamiltonianInstance inst(random_chain(3, 2, -2.0, 3.0, rng), 0.0, 1.0);
    const auto [out, info] = rescale_psd_with_info(inst);
    double sum_min = 0, max_range = 0;
    for (const auto& t : inst.hamiltonian.terms()) {
      sum_min += lambda_min(t.matrix);
      max_range = std::max(max_range, lambda_max(t.matrix) - lambda_min(t.matrix));
    }
    EXPECT_NEAR(lambda_min(HermitianMatrix(assemble_by_kron(out.hamiltonian))),
                (lambda_min(HermitianMatrix(assemble_by_kron(inst.hamiltonian))) - sum_min) / max_range, 1e-9);
    for (const auto& t : out.hamiltonian.terms()) {
      EXPECT_GE(lambda_min(t.matrix), -1e-12);
      EXPECT_LE(lambda_max(t.matrix), 1 + 1e-12);
    }
    EXPECT_NEAR(info.scale, max_range, 1e-12);
  }
}

TEST(Pad, OneLevelChain) {
  const double c = 0.4;
  const ChainHamiltonian h(2, 1, {{0, diag({c})}});
  const auto p = pad(h);
  ASSERT_EQ(p.d(), 2u);
  EXPECT_EQ(p.terms()[0].matrix.matrix(), diag({c, 1, 1, 1}).matrix());
}

TEST(Pad, RejectsUnscaledTerms) {
  EXPECT_THROW(pad(ChainHamiltonian(2, 2, {{0, diag({-0.5, 0, 0, 1})}})), InputError);
  EXPECT_THROW(pad(ChainHamiltonian(2, 2, {{0, diag({0, 0, 0, 2})}})), InputError);
}

TEST(Pad, TopStateAndGroundEnergy) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng = make_rng(seed);
    const std::size_t n = 2 + seed % 3, d = 1 + seed % 3;
    const auto h = rescale_psd(HamiltonianInstance(random_chain(n, d, -1, 1, rng), 0, 1)).hamiltonian;
    const auto p = pad(h);
    const ComplexMatrix big = assemble_by_kron(p);
    // |d>^n is the last basis vector.
    Eigen::VectorXcd top = Eigen::VectorXcd::Zero(big.rows());
    top[big.rows() - 1] = 1.0;
    EXPECT_LT((big * top - static_cast<double>(p.r()) * top).norm(), 1e-9);
    EXPECT_NEAR(lambda_min(HermitianMatrix(big)), lambda_min(HermitianMatrix(assemble_by_kron(h))), 1e-9);
    EXPECT_NEAR(lambda_max(HermitianMatrix(big)), static_cast<double>(p.r()), 1e-9);
  }
}

TEST(Pad, KeepsFrustratedGroundEnergy) {
  // Dropping a term of a frustrated chain lowers its energy, so a padding that
  // zeroed mixed sectors would pull lambda_min down.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = generate_instance(4, 2, InstanceKind::no_biased, seed);
    const double e0 = ground_energy(inst.hamiltonian);
    ASSERT_GT(e0, 1e-3);
    EXPECT_NEAR(ground_energy(pad(inst.hamiltonian)), e0, 1e-9);
  }
}

TEST(Assemble, MatchesKronRoute) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_rng(seed);
    const auto h = random_chain(2 + seed % 4, 2, -1, 1, rng);
    EXPECT_LT((assemble(h).matrix() - assemble_by_kron(h)).norm(), 1e-12);
    double norm_sum = 0;
    for (const auto& t : h.terms()) norm_sum += spectral_norm(t.matrix.matrix());
    EXPECT_LE(spectral_norm(assemble(h).matrix()), norm_sum + 1e-12);
  }
}

TEST(Assemble, SingleTermAndDiagonalSum) {
  const auto t = random_hermitian_bounded(4, -1, 1, 3);
  EXPECT_EQ(assemble(ChainHamiltonian(2, 2, {{0, t}})).matrix(), t.matrix());
  const ChainHamiltonian h(3, 2, {{0, diag({1, 0, 0, 0})}, {1, diag({0, 0, 0, 2})}});
  EXPECT_EQ(assemble(h).matrix(), diag({1, 1, 0, 2, 0, 0, 0, 2}).matrix());
}

TEST(Assemble, RefusesOversizedChains) {
  Rng rng = make_rng(1);
  EXPECT_THROW(assemble(random_chain(13, 2, 0, 1, rng)), ResourceLimit);
}

TEST(SplitOddEven, SitesAndSum) {
  Rng rng = make_rng(4);
  const auto h = random_chain(5, 2, -1, 1, rng);
  const auto parts = split_odd_even(h);
  ASSERT_EQ(parts.odd.r(), 2u);
  ASSERT_EQ(parts.even.r(), 2u);
  EXPECT_EQ(parts.odd.terms()[0].site, 0u);
  EXPECT_EQ(parts.odd.terms()[1].site, 2u);
  EXPECT_EQ(parts.even.terms()[0].site, 1u);
  EXPECT_EQ(parts.even.terms()[1].site, 3u);
  EXPECT_LT((assemble(parts.odd).matrix() + assemble(parts.even).matrix() - assemble(h).matrix()).norm(), 1e-12);
  const auto single = split_odd_even(ChainHamiltonian(2, 2, {{0, diag({0, 1, 0, 1})}}));
  EXPECT_EQ(single.odd.r(), 1u);
  EXPECT_EQ(single.even.r(), 0u);
}

TEST(SplitOddEven, PartsCommuteInternally) {
  Rng rng = make_rng(8);
  const auto parts = split_odd_even(random_chain(6, 2, -1, 1, rng));
  for (const auto* part : {&parts.odd, &parts.even}) {
    const auto& ts = part->terms();
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        const ComplexMatrix a = embed_span(ts[i].matrix.matrix(), ts[i].site, 2, part->dims());
        const ComplexMatrix b = embed_span(ts[j].matrix.matrix(), ts[j].site, 2, part->dims());
        EXPECT_LT((a * b - b * a).norm(), 1e-12);
      }
  }
}

TEST(Normalize, ThresholdArithmetic) {
  const ChainHamiltonian h(3, 2, {{0, diag({0, 0, 0, 1})}, {1, diag({0, 0, 0, 1})}});
  const auto n = normalize(h, 0.0, 1.0);
  EXPECT_NEAR(n.l, kPi / 2, 1e-15);
  EXPECT_NEAR(n.s, kPi / 4, 1e-15);
  EXPECT_THROW(normalize(h, 1.0, 1.0), InputError);
  EXPECT_THROW(normalize(h, -0.1, 1.0), InputError);
  EXPECT_THROW(normalize(h, 0.0, 2.5), InputError);
}

TEST(Normalize, EigenRangeScales) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_rng(seed);
    const auto h = pad(rescale_psd(HamiltonianInstance(random_chain(3, 2, -1, 1, rng), 0, 1)).hamiltonian);
    const auto n = normalize(h, 0.1, 0.9);
    EXPECT_NEAR(eig_range_oracle(n.hamiltonian), eig_range_oracle(h) * kPi / (2.0 * static_cast<double>(h.r())), 1e-9);
    // Both halves stay PSD and below the whole.
    const auto parts = split_odd_even(n.hamiltonian);
    const double whole = spectral_norm(assemble(n.hamiltonian).matrix());
    EXPECT_LE(spectral_norm(assemble(parts.odd).matrix()), whole + 1e-12);
    EXPECT_LE(spectral_norm(assemble(parts.even).matrix()), whole + 1e-12);
    EXPECT_GE(lambda_min(assemble(parts.odd)), -1e-12);
  }
}

TEST(EigRangeOracle, PaddedRangeIsROffsetByGroundEnergy) {
  EXPECT_EQ(eig_range_oracle(ChainHamiltonian(3, 2, {{0, HermitianMatrix::zero(4)}})), 0.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_rng(seed);
    const auto h = rescale_psd(HamiltonianInstance(random_chain(4, 2, -1, 1, rng), 0, 1)).hamiltonian;
    const double e0 = ground_energy(h);
    EXPECT_NEAR(eig_range_oracle(pad(h)), static_cast<double>(h.r()) - e0, 1e-9);
  }
}

TEST(EigRangeOracle, TermOrderDoesNotMatter) {
  Rng rng = make_rng(9);
  const auto h = random_chain(4, 2, -1, 1, rng);
  std::vector<LocalTerm> rev(h.terms().rbegin(), h.terms().rend());
  EXPECT_NEAR(eig_range_oracle(h), eig_range_oracle(ChainHamiltonian(4, 2, rev)), 1e-12);
}

TEST(Generate, KindsMeetTheirPromises) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto yes = generate_instance(4, 2, InstanceKind::yes_biased, seed);
    EXPECT_LE(ground_energy(yes.hamiltonian), yes.a);
    EXPECT_NEAR(ground_energy(yes.hamiltonian), 0.0, 1e-9);
    const auto no = generate_instance(3 + seed % 3, 2, InstanceKind::no_biased, seed);
    EXPECT_GE(ground_energy(no.hamiltonian), no.b);
    EXPECT_EQ(no.metadata["kind"], "no-biased");
    const auto rnd = generate_instance(3, 3, InstanceKind::random, seed);
    const auto res = rescale_psd(rnd);
    EXPECT_GE(res.a, -1e-12);
    EXPECT_LE(res.b, static_cast<double>(res.hamiltonian.r()) + 1e-12);
  }
}

TEST(Generate, SeedDeterminismAndErrors) {
  const auto a = generate_instance(3, 2, InstanceKind::no_biased, 5);
  const auto b = generate_instance(3, 2, InstanceKind::no_biased, 5);
  for (std::size_t k = 0; k < a.hamiltonian.r(); ++k) {
    EXPECT_EQ(a.hamiltonian.terms()[k].matrix.matrix(), b.hamiltonian.terms()[k].matrix.matrix());
  }
  EXPECT_EQ(a.a, b.a);
  EXPECT_THROW(generate_instance(2, 2, InstanceKind::no_biased, 1), InputError);
  EXPECT_THROW(generate_instance(13, 2, InstanceKind::random, 1), ResourceLimit);
  EXPECT_THROW(instance_kind_from_string("maybe"), InputError);
}

}  // namespace
