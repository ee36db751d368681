#include "gmrbm/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "gmrbm/format.hpp"

namespace gmrbm {

namespace {

struct Token {
  std::string_view text;
  std::size_t offset;
};

// Line-oriented reader that remembers byte offsets for diagnostics.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool at_end() const { return pos_ >= text_.size(); }
  std::size_t offset() const { return pos_; }

  /// Next line without its terminator; throws if the input is exhausted.
  Token line(const char* what) {
    if (at_end()) throw ParseError(ErrorCode::parse_error, pos_, std::string("unexpected end of input, expected ") + what);
    const std::size_t start = pos_;
    std::size_t stop = text_.find('\n', pos_);
    if (stop == std::string_view::npos) {
      stop = text_.size();
      pos_ = stop;
    } else {
      pos_ = stop + 1;
    }
    std::string_view l = text_.substr(start, stop - start);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return {l, start};
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<Token> split(Token line) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto& s = line.text;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back({s.substr(start, i - start), line.offset + start});
  }
  return out;
}

Eigen::VectorXd parse_values(Token line, std::size_t expected, const char* what) {
  const std::vector<Token> tokens = split(line);
  if (tokens.size() != expected) {
    throw ParseError(ErrorCode::dimension_mismatch, line.offset,
                     std::string(what) + ": expected " + std::to_string(expected) + " values, found " +
                         std::to_string(tokens.size()));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(expected));
  for (std::size_t k = 0; k < expected; ++k) {
    double x = 0;
    if (!parse_double(tokens[k].text, x))
      throw ParseError(ErrorCode::parse_error, tokens[k].offset, std::string(what) + ": malformed number");
    if (!std::isfinite(x))
      throw ParseError(ErrorCode::parse_error, tokens[k].offset, std::string(what) + ": non-finite value");
    out[static_cast<Eigen::Index>(k)] = x;
  }
  return out;
}

void append_values(std::string& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  out += '\n';
}

std::size_t parse_count(Token t, const char* what) {
  std::size_t x = 0;
  if (!parse_int(t.text, x)) throw ParseError(ErrorCode::parse_error, t.offset, std::string("malformed ") + what);
  return x;
}

void expect_no_trailing(LineReader& reader) {
  while (!reader.at_end()) {
    const Token extra = reader.line("nothing");
    if (!split(extra).empty()) throw ParseError(ErrorCode::parse_error, extra.offset, "unexpected trailing content");
  }
}

void check_magic(Token t, std::string_view magic) {
  if (t.text == magic) return;
  const std::string_view family = magic.substr(0, magic.size() - 1);
  if (t.text.starts_with(family))
    throw ParseError(ErrorCode::unsupported_version, t.offset,
                     "unsupported format version '" + std::string(t.text) + "', expected " + std::string(magic));
  throw ParseError(ErrorCode::parse_error, t.offset, "bad magic, expected " + std::string(magic));
}

std::uint32_t read_be32(std::string_view bytes, std::size_t at) {
  if (at + 4 > bytes.size()) throw ParseError(ErrorCode::parse_error, bytes.size(), "IDX header truncated");
  std::uint32_t x = 0;
  for (std::size_t k = 0; k < 4; ++k) x = (x << 8) | static_cast<unsigned char>(bytes[at + k]);
  return x;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::io_error, "write to '" + path.string() + "' failed");
}

std::string format_model(const RbmModel& model) {
  std::string out = std::string(kModelMagic) + ' ' + std::to_string(model.visible()) + ' ' +
                    std::to_string(model.hidden()) + '\n';
  for (Eigen::Index i = 0; i < model.weights().rows(); ++i) append_values(out, model.weights().row(i).transpose());
  append_values(out, model.visible_bias());
  append_values(out, model.hidden_bias());
  return out;
}

RbmModel parse_model(std::string_view text) {
  LineReader reader(text);
  const Token header = reader.line("model header");
  const std::vector<Token> fields = split(header);
  if (fields.empty()) throw ParseError(ErrorCode::parse_error, header.offset, "empty model header");
  check_magic(fields[0], kModelMagic);
  if (fields.size() != 3) throw ParseError(ErrorCode::parse_error, header.offset, "model header needs magic, r, h_dim");
  const std::size_t r = parse_count(fields[1], "visible count");
  const std::size_t h = parse_count(fields[2], "hidden count");
  if (r == 0 || h == 0) throw ParseError(ErrorCode::parse_error, header.offset, "layer sizes must be positive");

  Eigen::MatrixXd w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(h));
  for (std::size_t i = 0; i < r; ++i) w.row(static_cast<Eigen::Index>(i)) = parse_values(reader.line("weight row"), h, "weight row").transpose();
  Eigen::VectorXd bv = parse_values(reader.line("visible biases"), r, "visible biases");
  Eigen::VectorXd bh = parse_values(reader.line("hidden biases"), h, "hidden biases");
  expect_no_trailing(reader);
  return RbmModel(std::move(w), std::move(bv), std::move(bh));
}

void save_model(const RbmModel& model, const std::filesystem::path& path) { write_file(path, format_model(model)); }

RbmModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

std::string format_samples(const SampleBatch& batch) {
  const ChainSettings& s = batch.settings;
  std::string out = std::string(kSampleMagic) + " n=" + std::to_string(batch.size()) +
                    " r=" + std::to_string(batch.dimension()) + " seed=" + std::to_string(batch.seed) +
                    " burn_in=" + std::to_string(s.burn_in) + " thin=" + std::to_string(s.thin) +
                    " init=" + to_string(s.init) + " sampler=" + batch.sampler_id + '\n';
  out.reserve(out.size() + batch.size() * (batch.dimension() + 1));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t j = 0; j < batch.dimension(); ++j) out += batch.samples.get(i, j) ? '1' : '0';
    out += '\n';
  }
  return out;
}

SampleBatch parse_samples(std::string_view text) {
  LineReader reader(text);
  const Token header = reader.line("sample header");
  const std::vector<Token> fields = split(header);
  if (fields.empty()) throw ParseError(ErrorCode::parse_error, header.offset, "empty sample header");
  check_magic(fields[0], kSampleMagic);

  static constexpr std::string_view keys[] = {"n=", "r=", "seed=", "burn_in=", "thin=", "init=", "sampler="};
  if (fields.size() < std::size(keys)) throw ParseError(ErrorCode::parse_error, header.offset, "sample header incomplete");
  std::string_view values[std::size(keys)];
  for (std::size_t k = 0; k + 1 < std::size(keys); ++k) {
    const Token& f = fields[k + 1];
    if (!f.text.starts_with(keys[k]))
      throw ParseError(ErrorCode::parse_error, f.offset, "expected field '" + std::string(keys[k]) + "'");
    values[k] = f.text.substr(keys[k].size());
  }
  // sampler id runs to the end of the line and may contain spaces.
  const Token& sampler = fields[std::size(keys)];
  if (!sampler.text.starts_with(keys[6])) throw ParseError(ErrorCode::parse_error, sampler.offset, "expected field 'sampler='");
  const std::size_t id_start = sampler.offset - header.offset + keys[6].size();

  SampleBatch batch;
  const std::size_t n = parse_count({values[0], fields[1].offset}, "n");
  const std::size_t r = parse_count({values[1], fields[2].offset}, "r");
  if (!parse_int(values[2], batch.seed)) throw ParseError(ErrorCode::parse_error, fields[3].offset, "malformed seed");
  if (!parse_int(values[3], batch.settings.burn_in)) throw ParseError(ErrorCode::parse_error, fields[4].offset, "malformed burn_in");
  if (!parse_int(values[4], batch.settings.thin)) throw ParseError(ErrorCode::parse_error, fields[5].offset, "malformed thin");
  if (values[5] == "random") {
    batch.settings.init = ChainInit::random_uniform;
  } else if (values[5] == "given") {
    batch.settings.init = ChainInit::given_vector;
  } else {
    throw ParseError(ErrorCode::parse_error, fields[6].offset, "init must be 'random' or 'given'");
  }
  batch.settings.n_samples = n;
  batch.sampler_id = std::string(header.text.substr(id_start));

  batch.samples = BitMatrix(n, r);
  for (std::size_t i = 0; i < n; ++i) {
    const Token row = reader.line("sample row");
    if (row.text.size() != r)
      throw ParseError(ErrorCode::dimension_mismatch, row.offset,
                       "sample row has " + std::to_string(row.text.size()) + " bits, expected " + std::to_string(r));
    for (std::size_t j = 0; j < r; ++j) {
      const char c = row.text[j];
      if (c != '0' && c != '1') throw ParseError(ErrorCode::parse_error, row.offset + j, "sample bits must be 0 or 1");
      batch.samples.set(i, j, c == '1');
    }
  }
  expect_no_trailing(reader);
  return batch;
}

void save_samples(const SampleBatch& batch, const std::filesystem::path& path) {
  write_file(path, format_samples(batch));
}

SampleBatch load_samples(const std::filesystem::path& path) { return parse_samples(read_file(path)); }

BitMatrix parse_idx_images(std::string_view bytes, double threshold) {
  require(threshold > 0 && threshold <= 1, ErrorCode::invalid_argument, "binarization threshold must be in (0, 1]");
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != 0x00000803U) throw ParseError(ErrorCode::parse_error, 0, "bad IDX3 magic");
  const std::size_t count = read_be32(bytes, 4);
  const std::size_t rows = read_be32(bytes, 8);
  const std::size_t cols = read_be32(bytes, 12);
  const std::size_t pixels = rows * cols;
  constexpr std::size_t header = 16;
  if (bytes.size() < header + count * pixels)
    throw ParseError(ErrorCode::parse_error, bytes.size(),
                     "IDX data truncated: need " + std::to_string(header + count * pixels) + " bytes");
  BitMatrix out(count, pixels);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < pixels; ++j) {
      const auto px = static_cast<unsigned char>(bytes[header + i * pixels + j]);
      out.set(i, j, static_cast<double>(px) / 255.0 >= threshold);
    }
  }
  return out;
}

BitMatrix load_idx_images(const std::filesystem::path& path, double threshold) {
  return parse_idx_images(read_file(path), threshold);
}

BitMatrix synth_dataset(SynthKind kind, std::size_t r, std::size_t count, double noise, std::uint64_t seed) {
  require(r >= 4, ErrorCode::invalid_argument, "synthetic datasets need r >= 4");
  require(noise >= 0 && noise <= 1, ErrorCode::invalid_argument, "flip probability must be in [0, 1]");
  Rng rng(seed, {0x73796e7468ULL});
  BitMatrix out(count, r);
  for (std::size_t i = 0; i < count; ++i) {
    const bool choice = rng.bit();
    for (std::size_t j = 0; j < r; ++j) {
      bool bit = kind == SynthKind::two_cluster ? choice : ((j < r / 2) == choice);
      if (rng.bernoulli(noise)) bit = !bit;
      out.set(i, j, bit);
    }
  }
  return out;
}

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "two-cluster") return SynthKind::two_cluster;
  if (name == "bars") return SynthKind::bars;
  fail(ErrorCode::invalid_argument, "unknown synthetic dataset kind '" + std::string(name) + "'");
}

}  // namespace gmrbm
