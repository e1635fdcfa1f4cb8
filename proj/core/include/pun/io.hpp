#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pun/denoiser.hpp"
#include "pun/image.hpp"
#include "pun/phantom.hpp"
#include "pun/pruning.hpp"

namespace pun {

using Json = nlohmann::ordered_json;

enum class DType { F64, C128, U8 };

std::string to_string(DType dtype);
DType dtype_from_string(const std::string& name);
std::size_t element_size(DType dtype);

/// One tensor container: a single-line JSON header
///   {"dtype":"c128","shape":[4,32,32],"byte_order":"little"}
/// then '\n', then the raw little-endian payload (complex values as
/// interleaved re/im f64 pairs).
struct Tensor {
  DType dtype = DType::F64;
  std::vector<std::size_t> shape;
  std::vector<double> f64;
  std::vector<cplx> c128;
  std::vector<std::uint8_t> u8;

  static Tensor of(std::span<const double> values, std::vector<std::size_t> shape);
  static Tensor of(std::span<const cplx> values, std::vector<std::size_t> shape);
  static Tensor of(std::span<const std::uint8_t> values, std::vector<std::size_t> shape);

  std::size_t element_count() const;
};

void write_tensor(std::ostream& out, const Tensor& t);
/// Throws std::runtime_error on malformed headers or truncated payloads.
Tensor read_tensor(std::istream& in);

void write_tensor_file(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor_file(const std::filesystem::path& path);

/// Dataset directory: manifest.json plus one sample_NNNN.bin per record, each
/// holding four containers in order: ground truth [H,W] c128, k-space
/// [C,H,W] c128, sensitivity maps [C,H,W] c128, sampling mask [W] u8.
struct Dataset {
  DatasetConfig config;
  std::vector<SampleRecord> samples;
};

Json dataset_manifest(const DatasetConfig& cfg, std::span<const SampleRecord> samples);
void save_dataset(const std::filesystem::path& dir, const DatasetConfig& cfg,
                  std::span<const SampleRecord> samples);
Dataset load_dataset(const std::filesystem::path& dir);

/// Checkpoint directory: params.bin (f64 [d]), optional mask.bin (u8 [d]),
/// optional p.bin (f64 [d], mask-search probabilities), manifest.json.
struct Checkpoint {
  DenoiserParams params;
  std::optional<BinaryMask> mask;
  std::optional<std::vector<double>> probabilities;
  Json manifest = Json::object();
};

Json arch_to_json(const DenoiserArch& arch);
DenoiserArch arch_from_json(const Json& j);

/// Writes the checkpoint. The manifest's "arch", "layout" and "num_params"
/// fields are (re)generated from `params`; other fields are written as given.
void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& dir);

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

/// Binary greyscale PGM (P5) of |x|, scaled so that `peak` maps to 255.
void write_pgm(const std::filesystem::path& path, const ComplexImage& x, double peak);

void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

}  // namespace pun
