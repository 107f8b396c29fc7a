#include "cellkit/cache.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cellkit/hash.hpp"
#include "cellkit/subset_spec.hpp"

namespace cellkit {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kHeader = "cellkit-cache 1\n";
constexpr std::string_view kChecksumTag = "checksum ";
constexpr std::string_view kBytesTag = "bytes ";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

DiskCache::DiskCache(fs::path dir, std::string version, std::ostream* warnings)
    : dir_(std::move(dir)), version_(std::move(version)), warnings_(warnings) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  const auto probe = dir_ / (".probe." + std::to_string(::getpid()));
  std::ofstream out(probe);
  if (ec || !out) {
    enabled_ = false;
    warn("cache directory " + dir_.string() + " is not writable; continuing without cache");
    return;
  }
  out.close();
  fs::remove(probe, ec);
}

void DiskCache::warn(const std::string& message) {
  std::lock_guard lock(mutex_);
  if (warnings_) *warnings_ << "warning: " << message << '\n';
}

fs::path DiskCache::path_for(const std::string& key) const {
  return dir_ / (hex64(fnv1a(version_ + "|" + key)) + ".cells");
}

std::optional<std::string> DiskCache::load(const std::string& key, const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  // header, key line, "bytes N", N payload bytes, then the checksum line
  // covering everything before it.
  auto corrupt = [&]() -> std::optional<std::string> {
    ++corrupt_;
    warn("cache entry " + file.string() + " is corrupt; recomputing");
    return std::nullopt;
  };
  const std::string key_line = "key " + version_ + "|" + key + "\n";
  std::size_t pos = kHeader.size() + key_line.size();
  if (!text.starts_with(kHeader) || text.compare(kHeader.size(), key_line.size(), key_line) != 0)
    return corrupt();
  const auto eol = text.find('\n', pos);
  if (eol == std::string::npos || text.compare(pos, kBytesTag.size(), kBytesTag) != 0) return corrupt();
  std::size_t bytes = 0;
  const char* first = text.data() + pos + kBytesTag.size();
  const auto [end, ec] = std::from_chars(first, text.data() + eol, bytes);
  if (ec != std::errc() || end != text.data() + eol) return corrupt();
  pos = eol + 1;
  if (text.size() < pos || text.size() - pos < bytes) return corrupt();
  const std::size_t tag = pos + bytes;
  if (text.compare(tag, kChecksumTag.size(), kChecksumTag) != 0) return corrupt();
  const auto body = std::string_view(text).substr(0, tag);
  if (text.substr(tag + kChecksumTag.size()) != hex64(fnv1a(body)) + "\n") return corrupt();
  return text.substr(pos, bytes);
}

void DiskCache::store(const std::string& key, const fs::path& file, const std::string& payload) {
  std::string text(kHeader);
  text += "key " + version_ + "|" + key + "\n";
  text += std::string(kBytesTag) + std::to_string(payload.size()) + "\n";
  text += payload;
  text += std::string(kChecksumTag) + hex64(fnv1a(text)) + "\n";

  const auto tmp = fs::path(file.string() + ".tmp." + std::to_string(::getpid()) + "." +
                            std::to_string(temp_counter_++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
      warn("cannot write cache entry " + tmp.string());
      return;
    }
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) {
    warn("cannot install cache entry " + file.string() + ": " + ec.message());
    fs::remove(tmp, ec);
  }
}

std::string DiskCache::get_or_compute(const std::string& key,
                                      const std::function<std::string()>& compute,
                                      const std::function<bool(std::string_view)>& valid) {
  if (!enabled_) {
    ++misses_;
    return compute();
  }

  std::promise<std::string> promise;
  std::shared_future<std::string> pending;
  {
    std::lock_guard lock(mutex_);
    if (auto it = inflight_.find(key); it != inflight_.end()) {
      pending = it->second;
    } else {
      inflight_.emplace(key, promise.get_future().share());
    }
  }
  if (pending.valid()) {
    ++hits_;
    return pending.get();
  }

  const auto file = path_for(key);
  std::string payload;
  try {
    auto loaded = load(key, file);
    if (loaded && valid && !valid(*loaded)) {
      ++corrupt_;
      warn("cache entry " + file.string() + " has an unreadable payload; recomputing");
      loaded.reset();
    }
    if (loaded) {
      ++hits_;
      payload = std::move(*loaded);
    } else {
      ++misses_;
      payload = compute();
      store(key, file, payload);
    }
    promise.set_value(payload);
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard lock(mutex_);
    inflight_.erase(key);
    throw;
  }
  std::lock_guard lock(mutex_);
  inflight_.erase(key);
  return payload;
}

std::string cell_cache_key(const ElementSet& s, std::size_t u_max) {
  const Group& g = s.group();
  return g.label() + "|" + hex64(g.fingerprint()) + "|" + s.to_hex() + "|" + std::to_string(u_max);
}

std::string encode_cells(std::span<const CellRecord> cells) {
  std::string out = "cells " + std::to_string(cells.size()) + "\n";
  for (const auto& c : cells) {
    out += c.cell.to_hex();
    out += ' ';
    out += c.product.to_hex();
    out += ' ';
    out += std::to_string(c.deficiency);
    out += ' ';
    out += c.contains_identity ? '1' : '0';
    out += c.is_subgroup ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::optional<std::vector<CellRecord>> decode_cells(std::string_view payload, const ElementSet& s) {
  const Group& g = s.group();
  std::istringstream in{std::string(payload)};
  std::string tag;
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "cells") return std::nullopt;
  std::vector<CellRecord> out;
  out.reserve(count);
  try {
    for (std::size_t i = 0; i < count; ++i) {
      std::string cell_hex, product_hex, flags;
      std::size_t u = 0;
      if (!(in >> cell_hex >> product_hex >> u >> flags) || flags.size() != 2) return std::nullopt;
      const auto cell = ElementSet::from_words(g, parse_hex_words(cell_hex, g.word_count()));
      const auto image = ElementSet::from_words(g, parse_hex_words(product_hex, g.word_count()));
      if (cell.empty() || image.size() < cell.size() || image.size() - cell.size() != u) return std::nullopt;
      out.push_back({cell, image, u, flags[0] == '1', flags[1] == '1'});
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  std::string rest;
  if (in >> rest) return std::nullopt;
  return out;
}

CellProvider make_cell_provider(DiskCache* cache, const EnumerationOptions& options) {
  return [cache, options](const ElementSet& s, std::size_t u_max) {
    if (cache == nullptr || !cache->enabled()) return enumerate_cells(s, u_max, Exhaustive{}, options);
    const auto payload = cache->get_or_compute(
        cell_cache_key(s, u_max),
        [&] { return encode_cells(enumerate_cells(s, u_max, Exhaustive{}, options)); },
        [&](std::string_view p) { return decode_cells(p, s).has_value(); });
    return *decode_cells(payload, s);
  };
}

}  // namespace cellkit
