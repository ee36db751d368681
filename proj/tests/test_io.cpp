#include <gtest/gtest.h>

#include <filesystem>

#include "gmrbm/format.hpp"
#include "gmrbm/io.hpp"

using namespace gmrbm;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("gmrbm_test_" + name);
}

std::string idx_bytes(std::uint32_t magic, std::uint32_t count, std::uint32_t rows, std::uint32_t cols,
                      const std::vector<std::uint8_t>& pixels) {
  std::string out;
  for (std::uint32_t v : {magic, count, rows, cols})
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xFF));
  out.append(pixels.begin(), pixels.end());
  return out;
}

template <typename F>
Error catch_error(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an Error";
  return Error(ErrorCode::invalid_argument, "none");
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  Rng rng(1);
  for (int k = 0; k < 2000; ++k) {
    const double x = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(40)) - 20.0);
    double y = 0.0;
    ASSERT_TRUE(parse_double(format_double(x), y));
    EXPECT_EQ(x, y);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.25, 3), "0.250");
}

TEST(ModelFile, RoundTripIsExact) {
  const RbmModel m = random_model(4, 3, 0.7, 0.2, 5);
  const auto path = temp_path("model.gmrbm");
  save_model(m, path);
  const RbmModel back = load_model(path);
  EXPECT_EQ(back, m);
  EXPECT_EQ(format_model(back), format_model(m));
  std::filesystem::remove(path);
}

TEST(ModelFile, TruncatedFileReportsOffset) {
  const std::string text = format_model(random_model(4, 3, 0.7, 0.2, 5));
  const std::string cut = text.substr(0, text.size() * 2 / 3);
  try {
    parse_model(cut);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_LE(e.byte_offset(), cut.size());
    EXPECT_NE(std::string(e.what()).find("byte offset"), std::string::npos);
  }
}

TEST(ModelFile, HeaderErrors) {
  EXPECT_EQ(catch_error([] { parse_model("GMRBM2 1 1\n0\n0\n0\n"); }).code(), ErrorCode::unsupported_version);
  EXPECT_EQ(catch_error([] { parse_model("HELLO 1 1\n0\n0\n0\n"); }).code(), ErrorCode::parse_error);
  EXPECT_EQ(catch_error([] { parse_model("GMRBM1 2 1\n0\n0\n0 0\n"); }).code(), ErrorCode::parse_error);
  EXPECT_EQ(catch_error([] { parse_model("GMRBM1 1 2\n0\n0\n0 0\n"); }).code(), ErrorCode::dimension_mismatch);
  EXPECT_EQ(catch_error([] { parse_model("GMRBM1 1 1\nnan\n0\n0\n"); }).code(), ErrorCode::parse_error);
  EXPECT_EQ(catch_error([] { parse_model("GMRBM1 1 1\n1\n0\n0\n5\n"); }).code(), ErrorCode::parse_error);
  EXPECT_EQ(catch_error([] { load_model("/nonexistent/dir/model.gmrbm"); }).code(), ErrorCode::io_error);
  EXPECT_NO_THROW(parse_model("GMRBM1 1 1\n1.5\n-2\n0\n"));
}

TEST(SampleDump, RoundTripIsByteIdentical) {
  ChainSettings st;
  st.burn_in = 5;
  st.thin = 2;
  st.n_samples = 7;
  const SampleBatch b = run_chain(random_model(9, 3, 0.5, 0.5, 2), st, 4);
  const std::string text = format_samples(b);
  const SampleBatch back = parse_samples(text);
  EXPECT_EQ(format_samples(back), text);
  EXPECT_EQ(back.samples, b.samples);
  EXPECT_EQ(back.seed, b.seed);
  EXPECT_EQ(back.sampler_id, b.sampler_id);

  const auto path = temp_path("samples.txt");
  save_samples(b, path);
  EXPECT_EQ(load_samples(path).samples, b.samples);
  std::filesystem::remove(path);
}

TEST(SampleDump, RejectsBadRows) {
  const std::string good = "GMSMP1 n=2 r=3 seed=1 burn_in=0 thin=1 init=random sampler=ideal\n010\n111\n";
  EXPECT_NO_THROW(parse_samples(good));
  EXPECT_THROW(parse_samples("GMSMP1 n=2 r=3 seed=1 burn_in=0 thin=1 init=random sampler=ideal\n010\n1x1\n"),
               ParseError);
  EXPECT_THROW(parse_samples("GMSMP1 n=2 r=3 seed=1 burn_in=0 thin=1 init=random sampler=ideal\n010\n"), ParseError);
  EXPECT_THROW(parse_samples("GMSMP1 n=1 r=3 seed=1 burn_in=0 thin=1 init=random sampler=ideal\n0101\n"), ParseError);
}

TEST(Idx, FixtureFile) {
  const BitMatrix m = load_idx_images(std::filesystem::path(GMRBM_FIXTURE_DIR) / "two_images_2x2.idx3", 0.5);
  ASSERT_EQ(m.rows(), 2U);
  ASSERT_EQ(m.cols(), 4U);
  EXPECT_EQ(m.row_bits(0), (std::vector<std::uint8_t>{0, 1, 0, 1}));
  EXPECT_EQ(m.row_bits(1), (std::vector<std::uint8_t>{1, 0, 1, 0}));
}

TEST(Idx, ThresholdBoundaryAndEmpty) {
  const BitMatrix m = parse_idx_images(idx_bytes(0x803, 1, 1, 4, {254, 255, 0, 128}), 1.0);
  EXPECT_EQ(m.row_bits(0), (std::vector<std::uint8_t>{0, 1, 0, 0}));
  const BitMatrix e = parse_idx_images(idx_bytes(0x803, 0, 28, 28, {}), 0.5);
  EXPECT_EQ(e.rows(), 0U);
  EXPECT_EQ(e.cols(), 784U);
}

TEST(Idx, Errors) {
  EXPECT_THROW(parse_idx_images(idx_bytes(0x801, 1, 1, 1, {0}), 0.5), ParseError);
  EXPECT_THROW(parse_idx_images(idx_bytes(0x803, 2, 2, 2, {0, 1, 2}), 0.5), ParseError);
  EXPECT_THROW(parse_idx_images(std::string("\0\0\x08", 3), 0.5), ParseError);
  EXPECT_THROW(parse_idx_images(idx_bytes(0x803, 1, 1, 1, {0}), 0.0), Error);
}

TEST(Synth, Examples) {
  const BitMatrix clean = synth_dataset(SynthKind::two_cluster, 12, 100, 0.0, 3);
  for (std::size_t i = 0; i < clean.rows(); ++i) {
    const auto row = clean.row_bits(i);
    const bool all_zero = std::all_of(row.begin(), row.end(), [](auto b) { return b == 0; });
    const bool all_one = std::all_of(row.begin(), row.end(), [](auto b) { return b == 1; });
    EXPECT_TRUE(all_zero || all_one);
  }

  const BitMatrix bars = synth_dataset(SynthKind::bars, 8, 50, 0.0, 3);
  for (std::size_t i = 0; i < bars.rows(); ++i) {
    const auto row = bars.row_bits(i);
    const std::vector<std::uint8_t> left{1, 1, 1, 1, 0, 0, 0, 0}, right{0, 0, 0, 0, 1, 1, 1, 1};
    EXPECT_TRUE(row == left || row == right);
  }

  const BitMatrix noisy = synth_dataset(SynthKind::two_cluster, 16, 10000, 0.5, 4);
  double ones = 0.0;
  for (std::size_t i = 0; i < noisy.rows(); ++i)
    for (std::size_t j = 0; j < 16; ++j) ones += noisy.get(i, j);
  EXPECT_NEAR(ones / (16.0 * 10000.0), 0.5, 0.01);

  EXPECT_EQ(synth_dataset(SynthKind::bars, 10, 30, 0.1, 9), synth_dataset(SynthKind::bars, 10, 30, 0.1, 9));
  EXPECT_THROW(synth_dataset(SynthKind::bars, 3, 10, 0.1, 9), Error);
  EXPECT_EQ(parse_synth_kind("two-cluster"), SynthKind::two_cluster);
  EXPECT_THROW(parse_synth_kind("stripes"), Error);
}
