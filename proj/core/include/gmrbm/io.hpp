#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "gmrbm/bit_matrix.hpp"
#include "gmrbm/rbm.hpp"

namespace gmrbm {

// Model file, one logical record per line:
//   GMRBM1 <r> <h_dim>
//   <r lines: row i of W, h_dim values>
//   <b_v: r values>
//   <b_h: h_dim values>
// Values use the shortest decimal text that round-trips exactly.
inline constexpr std::string_view kModelMagic = "GMRBM1";

std::string format_model(const RbmModel& model);
RbmModel parse_model(std::string_view text);
void save_model(const RbmModel& model, const std::filesystem::path& path);
RbmModel load_model(const std::filesystem::path& path);

// Sample dump:
//   GMSMP1 n=<n> r=<r> seed=<seed> burn_in=<b> thin=<t> init=<random|given> sampler=<id to end of line>
//   <n lines of r characters '0'/'1'>
inline constexpr std::string_view kSampleMagic = "GMSMP1";

std::string format_samples(const SampleBatch& batch);
SampleBatch parse_samples(std::string_view text);
void save_samples(const SampleBatch& batch, const std::filesystem::path& path);
SampleBatch load_samples(const std::filesystem::path& path);

/// IDX3 unsigned-byte images (magic 0x00000803), each binarized as
/// pixel / 255 >= threshold and flattened row-major.
BitMatrix parse_idx_images(std::string_view bytes, double threshold);
BitMatrix load_idx_images(const std::filesystem::path& path, double threshold);

enum class SynthKind { two_cluster, bars };

/// two_cluster: all-zeros or all-ones prototype; bars: left or right half on.
/// Every bit is then flipped independently with probability `noise`.
BitMatrix synth_dataset(SynthKind kind, std::size_t r, std::size_t count, double noise, std::uint64_t seed);

SynthKind parse_synth_kind(std::string_view name);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace gmrbm
