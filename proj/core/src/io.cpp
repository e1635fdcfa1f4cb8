#include "pun/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pun {

namespace fs = std::filesystem;

std::string to_string(DType dtype) {
  switch (dtype) {
    case DType::F64: return "f64";
    case DType::C128: return "c128";
    case DType::U8: return "u8";
  }
  return "?";
}

DType dtype_from_string(const std::string& name) {
  if (name == "f64") return DType::F64;
  if (name == "c128") return DType::C128;
  if (name == "u8") return DType::U8;
  throw std::runtime_error("tensor: unknown dtype '" + name + "'");
}

std::size_t element_size(DType dtype) {
  switch (dtype) {
    case DType::F64: return 8;
    case DType::C128: return 16;
    case DType::U8: return 1;
  }
  return 0;
}

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

void check_count(std::size_t have, const std::vector<std::size_t>& shape) {
  if (have != product(shape)) throw std::invalid_argument("tensor: value count does not match shape");
}

// Payload doubles are little-endian on disk.
void put_f64(std::string& buf, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

}  // namespace

Tensor Tensor::of(std::span<const double> values, std::vector<std::size_t> shape) {
  check_count(values.size(), shape);
  Tensor t;
  t.dtype = DType::F64;
  t.shape = std::move(shape);
  t.f64.assign(values.begin(), values.end());
  return t;
}

Tensor Tensor::of(std::span<const cplx> values, std::vector<std::size_t> shape) {
  check_count(values.size(), shape);
  Tensor t;
  t.dtype = DType::C128;
  t.shape = std::move(shape);
  t.c128.assign(values.begin(), values.end());
  return t;
}

Tensor Tensor::of(std::span<const std::uint8_t> values, std::vector<std::size_t> shape) {
  check_count(values.size(), shape);
  Tensor t;
  t.dtype = DType::U8;
  t.shape = std::move(shape);
  t.u8.assign(values.begin(), values.end());
  return t;
}

std::size_t Tensor::element_count() const { return product(shape); }

void write_tensor(std::ostream& out, const Tensor& t) {
  Json header;
  header["dtype"] = to_string(t.dtype);
  header["shape"] = t.shape;
  header["byte_order"] = "little";
  std::string buf = header.dump();
  buf.push_back('\n');
  const std::size_t n = t.element_count();
  buf.reserve(buf.size() + n * element_size(t.dtype));
  switch (t.dtype) {
    case DType::F64:
      check_count(t.f64.size(), t.shape);
      for (double v : t.f64) put_f64(buf, v);
      break;
    case DType::C128:
      check_count(t.c128.size(), t.shape);
      for (const auto& v : t.c128) {
        put_f64(buf, v.real());
        put_f64(buf, v.imag());
      }
      break;
    case DType::U8:
      check_count(t.u8.size(), t.shape);
      buf.append(reinterpret_cast<const char*>(t.u8.data()), t.u8.size());
      break;
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("tensor: write failed");
}

Tensor read_tensor(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("tensor: missing header");
  Json header;
  try {
    header = Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("tensor: malformed header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("dtype") || !header.contains("shape") ||
      header.value("byte_order", "") != "little") {
    throw std::runtime_error("tensor: header must carry dtype, shape and byte_order \"little\"");
  }
  Tensor t;
  t.dtype = dtype_from_string(header.at("dtype").get<std::string>());
  t.shape = header.at("shape").get<std::vector<std::size_t>>();
  const std::size_t n = t.element_count();
  std::vector<unsigned char> raw(n * element_size(t.dtype));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw std::runtime_error("tensor: truncated payload (expected " + std::to_string(raw.size()) + " bytes)");
  }
  switch (t.dtype) {
    case DType::F64:
      t.f64.resize(n);
      for (std::size_t i = 0; i < n; ++i) t.f64[i] = get_f64(raw.data() + 8 * i);
      break;
    case DType::C128:
      t.c128.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        t.c128[i] = cplx{get_f64(raw.data() + 16 * i), get_f64(raw.data() + 16 * i + 8)};
      }
      break;
    case DType::U8:
      t.u8.assign(raw.begin(), raw.end());
      break;
  }
  return t;
}

void write_tensor_file(const fs::path& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_tensor(out, t);
}

Tensor read_tensor_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_tensor(in);
}

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

namespace {

std::string sample_file_name(std::size_t i) {
  char name[32];
  std::snprintf(name, sizeof(name), "sample_%04zu.bin", i);
  return name;
}

Json family_to_json(const PhantomFamily& f) {
  Json j;
  j["name"] = f.name;
  j["ellipses"] = {f.min_ellipses, f.max_ellipses};
  j["axis_range"] = {f.min_axis, f.max_axis};
  j["intensity_range"] = {f.min_intensity, f.max_intensity};
  j["max_phase_frequency"] = f.max_phase_frequency;
  if (f.name == "shifted") {
    j["note"] = "synthetic analogue of an anatomical distribution shift, not real anatomy";
  }
  return j;
}

}  // namespace

Json dataset_manifest(const DatasetConfig& cfg, std::span<const SampleRecord> samples) {
  Json m;
  m["format"] = "pun-dataset";
  m["version"] = 1;
  Json c;
  c["num_samples"] = cfg.num_samples;
  c["image_size"] = cfg.image_size;
  c["num_coils"] = cfg.num_coils;
  c["acceleration"] = cfg.acceleration;
  c["acs_width"] = cfg.acs_width;
  c["noise_sigma"] = cfg.noise_sigma;
  c["base_seed"] = cfg.base_seed;
  c["family"] = cfg.family;
  m["config"] = c;
  m["family"] = family_to_json(PhantomFamily::by_name(cfg.family));
  m["pipeline"] = "phantom -> maps -> forward (orthonormal centred FFT) -> mask -> noise -> normalise";
  m["normalization"] = "k-space divided by max(|Re|,|Im|); ground truth stored unscaled, divide by scale";
  m["tensors"] = {"ground_truth", "kspace", "maps", "mask"};
  Json list = Json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Json s;
    s["file"] = sample_file_name(i);
    s["seed"] = samples[i].seed;
    s["scale"] = samples[i].scale;
    list.push_back(s);
  }
  m["samples"] = list;
  return m;
}

void save_dataset(const fs::path& dir, const DatasetConfig& cfg, std::span<const SampleRecord> samples) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const std::size_t h = s.ground_truth.height();
    const std::size_t w = s.ground_truth.width();
    const std::size_t c = s.kspace.num_coils();
    std::ofstream out(dir / sample_file_name(i), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write sample file in " + dir.string());
    write_tensor(out, Tensor::of(s.ground_truth.data(), {h, w}));
    write_tensor(out, Tensor::of(s.kspace.data(), {c, h, w}));
    write_tensor(out, Tensor::of(s.maps.data(), {c, h, w}));
    write_tensor(out, Tensor::of(std::span<const std::uint8_t>(s.mask.lines), {w}));
  }
  write_json_file(dir / "manifest.json", dataset_manifest(cfg, samples));
}

Dataset load_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw std::runtime_error("no dataset manifest at " + manifest_path.string());
  const Json m = read_json_file(manifest_path);
  if (m.value("format", "") != "pun-dataset") throw std::runtime_error("not a pun dataset: " + dir.string());
  Dataset ds;
  const Json& c = m.at("config");
  ds.config.num_samples = c.at("num_samples").get<std::size_t>();
  ds.config.image_size = c.at("image_size").get<std::size_t>();
  ds.config.num_coils = c.at("num_coils").get<std::size_t>();
  ds.config.acceleration = c.at("acceleration").get<double>();
  ds.config.acs_width = c.at("acs_width").get<std::size_t>();
  ds.config.noise_sigma = c.at("noise_sigma").get<double>();
  ds.config.base_seed = c.at("base_seed").get<std::uint64_t>();
  ds.config.family = c.at("family").get<std::string>();

  for (const auto& entry : m.at("samples")) {
    std::ifstream in(dir / entry.at("file").get<std::string>(), std::ios::binary);
    if (!in) throw std::runtime_error("missing sample file " + entry.at("file").get<std::string>());
    Tensor gt = read_tensor(in);
    Tensor ks = read_tensor(in);
    Tensor maps = read_tensor(in);
    Tensor mask = read_tensor(in);
    if (gt.shape.size() != 2 || ks.shape.size() != 3 || maps.shape != ks.shape || mask.shape.size() != 1 ||
        gt.dtype != DType::C128 || ks.dtype != DType::C128 || maps.dtype != DType::C128 ||
        mask.dtype != DType::U8) {
      throw std::runtime_error("sample file has unexpected tensor layout");
    }
    SampleRecord r;
    r.ground_truth = ComplexImage(gt.shape[0], gt.shape[1], std::move(gt.c128));
    r.kspace = KSpaceData(ks.shape[0], ks.shape[1], ks.shape[2], std::move(ks.c128));
    r.maps = SensitivityMaps::from_normalized(CoilArray(maps.shape[0], maps.shape[1], maps.shape[2],
                                                       std::move(maps.c128)));
    r.mask = SamplingMask{std::move(mask.u8), ds.config.acceleration, ds.config.acs_width};
    r.scale = entry.at("scale").get<double>();
    r.seed = entry.at("seed").get<std::uint64_t>();
    ds.samples.push_back(std::move(r));
  }
  return ds;
}

Json arch_to_json(const DenoiserArch& arch) {
  Json j;
  j["num_layers"] = arch.num_layers;
  j["hidden_channels"] = arch.hidden_channels;
  j["kernel_size"] = arch.kernel_size;
  j["residual"] = arch.residual;
  j["input_convention"] = "complex image split into 2 real channels (re, im)";
  return j;
}

DenoiserArch arch_from_json(const Json& j) {
  DenoiserArch a;
  a.num_layers = j.at("num_layers").get<std::size_t>();
  a.hidden_channels = j.at("hidden_channels").get<std::size_t>();
  a.kernel_size = j.at("kernel_size").get<std::size_t>();
  a.residual = j.at("residual").get<bool>();
  a.validate();
  return a;
}

void save_checkpoint(const fs::path& dir, const Checkpoint& ckpt) {
  ckpt.params.validate();
  const std::size_t d = ckpt.params.size();
  fs::create_directories(dir);
  Json manifest = ckpt.manifest.is_object() ? ckpt.manifest : Json::object();
  manifest["arch"] = arch_to_json(ckpt.params.arch);
  Json layout = Json::array();
  for (const auto& b : ckpt.params.layout) {
    Json e;
    e["kind"] = to_string(b.kind);
    e["layer"] = b.layer;
    e["shape"] = b.shape;
    e["offset"] = b.offset;
    layout.push_back(e);
  }
  manifest["layout"] = layout;
  manifest["num_params"] = d;

  write_tensor_file(dir / "params.bin", Tensor::of(std::span<const double>(ckpt.params.flat), {d}));
  if (ckpt.mask) {
    if (ckpt.mask->size() != d) throw std::invalid_argument("checkpoint: mask length mismatch");
    write_tensor_file(dir / "mask.bin", Tensor::of(std::span<const std::uint8_t>(ckpt.mask->bits), {d}));
  } else {
    fs::remove(dir / "mask.bin");
  }
  if (ckpt.probabilities) {
    if (ckpt.probabilities->size() != d) throw std::invalid_argument("checkpoint: p-vector length mismatch");
    write_tensor_file(dir / "p.bin", Tensor::of(std::span<const double>(*ckpt.probabilities), {d}));
  } else {
    fs::remove(dir / "p.bin");
  }
  write_json_file(dir / "manifest.json", manifest);
}

Checkpoint load_checkpoint(const fs::path& dir) {
  if (!fs::exists(dir / "manifest.json") || !fs::exists(dir / "params.bin")) {
    throw std::runtime_error("no checkpoint at " + dir.string());
  }
  Checkpoint ckpt;
  ckpt.manifest = read_json_file(dir / "manifest.json");
  const DenoiserArch arch = arch_from_json(ckpt.manifest.at("arch"));
  Tensor params = read_tensor_file(dir / "params.bin");
  if (params.dtype != DType::F64) throw std::runtime_error("checkpoint: params must be f64");
  ckpt.params = DenoiserParams{arch, std::move(params.f64), make_layout(arch)};
  ckpt.params.validate();
  if (fs::exists(dir / "mask.bin")) {
    Tensor m = read_tensor_file(dir / "mask.bin");
    if (m.dtype != DType::U8 || m.u8.size() != ckpt.params.size()) throw std::runtime_error("checkpoint: bad mask");
    ckpt.mask = BinaryMask{std::move(m.u8)};
  }
  if (fs::exists(dir / "p.bin")) {
    Tensor p = read_tensor_file(dir / "p.bin");
    if (p.dtype != DType::F64 || p.f64.size() != ckpt.params.size()) throw std::runtime_error("checkpoint: bad p-vector");
    ckpt.probabilities = std::move(p.f64);
  }
  return ckpt;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_pgm(const fs::path& path, const ComplexImage& x, double peak) {
  if (!(peak > 0.0)) throw std::invalid_argument("write_pgm: peak must be positive");
  std::string buf = "P5\n" + std::to_string(x.width()) + " " + std::to_string(x.height()) + "\n255\n";
  for (const auto& v : x.data()) {
    const double scaled = std::round(255.0 * std::abs(v) / peak);
    buf.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(scaled, 0.0, 255.0))));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace pun
