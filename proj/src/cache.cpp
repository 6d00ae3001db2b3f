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

#include "cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace sl3 {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'S', 'L', '3', 'H', 'O', 'M', 'L', '1'};
constexpr u32 kVersion = 1;

template <class T>
void put(std::ostream& o, const T& v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
bool get(std::istream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

void put_string(std::ostream& o, const std::string& s) {
  put(o, static_cast<u32>(s.size()));
  o.write(s.data(), static_cast<std::streamsize>(s.size()));
}
bool get_string(std::istream& in, std::string& s) {
  u32 n = 0;
  if (!get(in, n) || n > 4096) return false;
  s.resize(n);
  return static_cast<bool>(in.read(s.data(), n));
}

}  // namespace

std::string HomologyCache::path_for(u32 p, u32 N, const Weight& w, const Character& eps) const {
  return dir_ + "/homology/" + std::to_string(p) + "_" + std::to_string(N) + "_" + std::to_string(w.a) + "-" +
         std::to_string(w.b) + "-" + std::to_string(w.c) + "_" + eps.name() + ".bin";
}

std::optional<HomologySpace> HomologyCache::load(u32 p, u32 N, const Weight& w, const Character& eps) const {
  std::ifstream in(path_for(p, N, w, eps), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  u32 version = 0, fp = 0, fN = 0;
  std::int32_t a = 0, b = 0, c = 0;
  std::string name;
  u64 mdim = 0, hdim = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return std::nullopt;
  if (!get(in, version) || version != kVersion) return std::nullopt;
  if (!get(in, fp) || !get(in, fN) || !get(in, a) || !get(in, b) || !get(in, c) || !get_string(in, name))
    return std::nullopt;
  if (fp != p || fN != N || !(Weight{a, b, c} == w) || name != eps.name()) return std::nullopt;
  if (!get(in, mdim) || !get(in, hdim)) return std::nullopt;
  auto V = std::make_shared<InducedModule>(irreducible_module(w, p), N, eps);
  if (V->dim() != mdim || hdim > mdim) return std::nullopt;
  std::vector<size_t> dist(hdim);
  for (auto& d : dist) {
    u64 x = 0;
    if (!get(in, x) || x >= mdim) return std::nullopt;
    d = x;
  }
  std::vector<Vec> basis(hdim, Vec(mdim, 0));
  for (auto& v : basis) {
    u64 nnz = 0;
    if (!get(in, nnz) || nnz > mdim) return std::nullopt;
    for (u64 t = 0; t < nnz; ++t) {
      u32 col = 0, val = 0;
      if (!get(in, col) || !get(in, val) || col >= mdim || val >= p) return std::nullopt;
      v[col] = val;
    }
  }
  return HomologySpace(std::move(V), w, std::move(basis), std::move(dist));
}

void HomologyCache::store(const HomologySpace& H) const {
  const std::string path = path_for(H.p(), H.level(), H.weight(), H.character());
  fs::create_directories(fs::path(path).parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + tmp);
    out.write(kMagic, 8);
    put(out, kVersion);
    put(out, H.p());
    put(out, H.level());
    put(out, static_cast<std::int32_t>(H.weight().a));
    put(out, static_cast<std::int32_t>(H.weight().b));
    put(out, static_cast<std::int32_t>(H.weight().c));
    put_string(out, H.character().name());
    put(out, static_cast<u64>(H.module().dim()));
    put(out, static_cast<u64>(H.dim()));
    for (size_t d : H.distinguished()) put(out, static_cast<u64>(d));
    for (const auto& v : H.basis()) {
      const u64 nnz = static_cast<u64>(std::count_if(v.begin(), v.end(), [](u32 x) { return x != 0; }));
      put(out, nnz);
      for (size_t i = 0; i < v.size(); ++i)
        if (v[i]) {
          put(out, static_cast<u32>(i));
          put(out, v[i]);
        }
    }
    if (!out) fail(ErrorKind::Io, "short write to " + tmp);
  }
  fs::rename(tmp, path);
}

CacheLock::CacheLock(const std::string& dir) {
  fs::create_directories(dir);
  const std::string path = dir + "/.lock";
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
  if (fd_ < 0) fail(ErrorKind::Io, "cannot open lock file " + path);
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    fail(ErrorKind::Io, "cannot lock " + path);
  }
}

CacheLock::~CacheLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

std::vector<CacheEntry> cache_list(const std::string& dir) {
  std::vector<CacheEntry> out;
  for (const char* kind : {"homology", "symbols"}) {
    const fs::path sub = fs::path(dir) / kind;
    if (!fs::is_directory(sub)) continue;
    for (const auto& e : fs::directory_iterator(sub)) {
      if (!e.is_regular_file() || e.path().extension() != ".bin") continue;
      out.push_back({kind, (fs::path(kind) / e.path().filename()).string(), e.file_size()});
    }
  }
  std::sort(out.begin(), out.end(), [](const CacheEntry& x, const CacheEntry& y) { return x.file < y.file; });
  return out;
}

size_t cache_clear(const std::string& dir) {
  size_t n = 0;
  for (const auto& e : cache_list(dir)) n += fs::remove(fs::path(dir) / e.file) ? 1 : 0;
  return n;
}

}  // namespace sl3
