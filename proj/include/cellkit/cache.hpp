#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cellkit/cell_engine.hpp"
#include "cellkit/group.hpp"

namespace cellkit {

/// Content-addressed on-disk cache, one file per key.
///
/// File layout (text):
///   cellkit-cache 1
///   key <version>|<canonical key>
///   bytes <n>
///   <n payload bytes>
///   checksum <fnv1a-64 of all preceding bytes, 16 hex digits>
///
/// Writes go to a temporary file that is renamed into place. Entries whose
/// header, key or checksum do not match are discarded with a warning and
/// recomputed. If the directory is not writable the cache disables itself
/// (with a warning) and every lookup computes.
class DiskCache {
 public:
  DiskCache(std::filesystem::path dir, std::string version, std::ostream* warnings = nullptr);

  bool enabled() const noexcept { return enabled_; }
  const std::string& version() const noexcept { return version_; }

  // `valid` may reject a payload that passed the checksum; it is then
  // treated like a corrupt entry. Concurrent callers with the same key share
  // a single computation.
  std::string get_or_compute(const std::string& key, const std::function<std::string()>& compute,
                             const std::function<bool(std::string_view)>& valid = {});

  std::filesystem::path path_for(const std::string& key) const;

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  std::size_t corrupt() const noexcept { return corrupt_; }

 private:
  std::optional<std::string> load(const std::string& key, const std::filesystem::path& file);
  void store(const std::string& key, const std::filesystem::path& file, const std::string& payload);
  void warn(const std::string& message);

  std::filesystem::path dir_;
  std::string version_;
  std::ostream* warnings_;
  bool enabled_ = true;
  std::mutex mutex_;
  std::map<std::string, std::shared_future<std::string>> inflight_;
  std::atomic<std::size_t> hits_{0}, misses_{0}, corrupt_{0}, temp_counter_{0};
};

// Key for an exhaustive enumeration of (group, S, u_max).
std::string cell_cache_key(const ElementSet& s, std::size_t u_max);

std::string encode_cells(std::span<const CellRecord> cells);
// nullopt when the payload is malformed for this group and S.
std::optional<std::vector<CellRecord>> decode_cells(std::string_view payload, const ElementSet& s);

// Exhaustive enumeration through the cache (plain enumeration when null).
CellProvider make_cell_provider(DiskCache* cache, const EnumerationOptions& options);

}  // namespace cellkit
