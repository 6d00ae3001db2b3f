// Copyright 2026 The sl3hecke Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// On-disk cache of solved homology bases.  Symbol decompositions live next
// to them under <dir>/symbols (see SymbolCache).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homology.hpp"

namespace sl3 {

class HomologyCache {
 public:
  explicit HomologyCache(std::string dir) : dir_(std::move(dir)) {}
  const std::string& dir() const { return dir_; }

  // <dir>/homology/<p>_<N>_<a>-<b>-<c>_<eps>.bin
  std::string path_for(u32 p, u32 N, const Weight& w, const Character& eps) const;
  std::optional<HomologySpace> load(u32 p, u32 N, const Weight& w, const Character& eps) const;
  void store(const HomologySpace& H) const;

 private:
  std::string dir_;
};

// Exclusive advisory lock on <dir>/.lock for the lifetime of the object.
class CacheLock {
 public:
  explicit CacheLock(const std::string& dir);
  ~CacheLock();
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  int fd_ = -1;
};

struct CacheEntry {
  std::string kind;  // "homology" or "symbols"
  std::string file;  // relative to the cache directory
  unsigned long long bytes = 0;
};
std::vector<CacheEntry> cache_list(const std::string& dir);
// Removes cache files.  Returns how many were deleted.
size_t cache_clear(const std::string& dir);

}  // namespace sl3
