#include "cloudgan/train/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>

#include "cloudgan/core/error.hpp"

namespace cloudgan::train {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'C', 'L', 'D', 'G', 'C', 'K', 'P', '1'};
constexpr int kFormat = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

std::size_t element_count(const std::vector<int>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t acc, int d) { return acc * static_cast<std::size_t>(d); });
}

}  // namespace

const NamedTensor* Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void save_checkpoint(const Checkpoint& ckpt, const fs::path& path) {
  json entries = json::array();
  std::uint64_t offset = 0;
  for (const auto& t : ckpt.tensors) {
    if (element_count(t.shape) != t.values.size()) throw ShapeError("checkpoint tensor " + t.name + ": shape/size mismatch");
    entries.push_back({{"name", t.name}, {"shape", t.shape}, {"dtype", "float32"}, {"offset", offset}});
    offset += t.values.size() * sizeof(float);
  }
  const json header{{"format", kFormat},         {"epoch", ckpt.epoch},      {"config_hash", ckpt.config_hash},
                    {"config", ckpt.config},     {"metrics", ckpt.metrics},  {"optimizer", ckpt.optimizer},
                    {"tensors", entries}};
  const std::string text = header.dump();
  const std::uint64_t length = text.size();

  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&length), sizeof length);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& t : ckpt.tensors) {
      out.write(reinterpret_cast<const char*>(t.values.data()),
                static_cast<std::streamsize>(t.values.size() * sizeof(float)));
    }
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

Checkpoint load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing checkpoint " + path.string());
  const auto corrupt = [&](const std::string& why) { return DataError("corrupt checkpoint " + path.string() + ": " + why); };

  char magic[8];
  std::uint64_t length = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw corrupt("bad magic");
  if (!in.read(reinterpret_cast<char*>(&length), sizeof length)) throw corrupt("truncated header length");

  const auto file_size = fs::file_size(path);
  const std::uint64_t payload_start = sizeof magic + sizeof length + length;
  if (payload_start > file_size) throw corrupt("header length exceeds file size");
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) throw corrupt("truncated header");

  Checkpoint ckpt;
  try {
    const json header = json::parse(text);
    if (header.at("format").get<int>() != kFormat) throw corrupt("unsupported format version");
    ckpt.epoch = header.at("epoch").get<int>();
    ckpt.config_hash = header.at("config_hash").get<std::string>();
    ckpt.config = header.at("config");
    ckpt.metrics = header.at("metrics");
    ckpt.optimizer = header.at("optimizer");
    for (const auto& e : header.at("tensors")) {
      if (e.at("dtype").get<std::string>() != "float32") throw corrupt("unsupported dtype");
      NamedTensor t{e.at("name").get<std::string>(), e.at("shape").get<std::vector<int>>(), {}};
      const auto offset = e.at("offset").get<std::uint64_t>();
      const std::size_t count = element_count(t.shape);
      if (payload_start + offset + count * sizeof(float) > file_size) throw corrupt("tensor " + t.name + " out of bounds");
      t.values.resize(count);
      in.seekg(static_cast<std::streamoff>(payload_start + offset));
      if (!in.read(reinterpret_cast<char*>(t.values.data()), static_cast<std::streamsize>(count * sizeof(float)))) {
        throw corrupt("truncated tensor " + t.name);
      }
      ckpt.tensors.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw corrupt(e.what());
  }
  return ckpt;
}

void store_params(Checkpoint& ckpt, const std::string& prefix, const ParamRefs<float>& params) {
  for (const auto* p : params) ckpt.tensors.push_back({prefix + p->name, p->shape, std::vector<float>(p->value.begin(), p->value.end())});
}

void restore_params(const Checkpoint& ckpt, const std::string& prefix, const ParamRefs<float>& params) {
  for (auto* p : params) {
    const NamedTensor* t = ckpt.find(prefix + p->name);
    if (!t) throw DataError("checkpoint lacks tensor " + prefix + p->name);
    if (t->shape != p->shape) throw DataError("checkpoint tensor " + t->name + " has the wrong shape");
    p->value.assign(t->values.begin(), t->values.end());
  }
}

}  // namespace cloudgan::train
