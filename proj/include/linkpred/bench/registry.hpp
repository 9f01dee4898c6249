// Copyright 2026 The linkpred Authors.
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

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "linkpred/bench/config.hpp"
#include "linkpred/generators.hpp"
#include "linkpred/graph.hpp"

namespace linkpred::bench {

struct DatasetEntry {
  std::string name;
  std::filesystem::path path;
  std::optional<std::size_t> n;  // expected node count
  std::optional<std::size_t> m;  // expected edge count
};

/**
 * Resolves dataset names. Lookup order: manifest entries, generator specs
 * (complete:N, star:LEAVES, path:N, ring:N, er:N:P:SEED, gnm:N:M:SEED),
 * then a plain edge-list path.
 *
 * Manifest lines are "name path [N M]"; relative paths are taken from the
 * manifest's directory.
 */
class Registry {
 public:
  Registry() = default;

  static Registry load(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw DataError("cannot open registry '" + manifest.string() + "'");
    Registry r;
    const auto base = manifest.parent_path();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream fields(line);
      std::vector<std::string> tok;
      for (std::string t; fields >> t;) tok.push_back(t);
      if (tok.empty()) continue;
      if (tok.size() != 2 && tok.size() != 4) {
        throw ParseError(line_no, "expected 'name path' or 'name path N M'");
      }
      DatasetEntry e;
      e.name = tok[0];
      e.path = std::filesystem::path(tok[1]);
      if (e.path.is_relative()) e.path = base / e.path;
      if (tok.size() == 4) {
        try {
          e.n = detail::to_count(tok[2]);
          e.m = detail::to_count(tok[3]);
        } catch (const InvalidArgument& err) {
          throw ParseError(line_no, err.what());
        }
      }
      r.add(std::move(e));
    }
    return r;
  }

  void add(DatasetEntry e) { entries_[e.name] = std::move(e); }

  const std::map<std::string, DatasetEntry>& entries() const noexcept { return entries_; }

  Graph resolve(const std::string& name) const {
    if (auto it = entries_.find(name); it != entries_.end()) return read(it->second);
    if (auto g = generate(name)) return *g;
    if (std::filesystem::exists(name)) return read({name, name, {}, {}});
    throw DataError("unknown dataset '" + name + "' (not in registry, not a generator, no such file)");
  }

  static std::optional<Graph> generate(const std::string& spec) {
    const auto parts = detail::split(spec, ':');
    const std::string& kind = parts[0];
    auto arg = [&](std::size_t i) {
      if (i >= parts.size()) throw InvalidArgument("generator '" + spec + "' is missing arguments");
      return parts[i];
    };
    auto node_count = [&](std::size_t i) {
      const auto v = detail::to_count(arg(i));
      if (v > 0xFFFFFFFEull) throw InvalidArgument("node count too large");
      return node_t(v);
    };
    auto expect = [&](std::size_t count) {
      if (parts.size() != count) throw InvalidArgument("generator '" + spec + "' has wrong arity");
    };
    if (parts.size() < 2) return std::nullopt;
    if (kind == "complete") { expect(2); return gen::complete(node_count(1)); }
    if (kind == "star") { expect(2); return gen::star(node_count(1)); }
    if (kind == "path") { expect(2); return gen::path(node_count(1)); }
    if (kind == "ring") { expect(2); return gen::ring(node_count(1)); }
    if (kind == "er") {
      expect(4);
      const double p = detail::to_double(arg(2));
      if (!(p >= 0 && p <= 1)) throw InvalidArgument("er probability must lie in [0, 1]");
      return gen::erdos_renyi(node_count(1), p, detail::to_count(arg(3)));
    }
    if (kind == "gnm") {
      expect(4);
      return gen::erdos_renyi_gnm(node_count(1), detail::to_count(arg(2)), detail::to_count(arg(3)));
    }
    return std::nullopt;
  }

 private:
  static Graph read(const DatasetEntry& e) {
    std::ifstream in(e.path);
    if (!in) throw DataError("dataset '" + e.name + "': cannot open '" + e.path.string() + "'");
    Graph g = [&] {
      try {
        return parse_edge_list(in);
      } catch (const ParseError& err) {
        throw ParseError(err.line(), "dataset '" + e.name + "': " + e.path.string());
      } catch (const DataError& err) {
        throw DataError("dataset '" + e.name + "': " + err.what());
      }
    }();
    if ((e.n && *e.n != g.n()) || (e.m && *e.m != g.m())) {
      throw DataError("dataset '" + e.name + "': expected N=" +
                      (e.n ? std::to_string(*e.n) : "?") + " M=" +
                      (e.m ? std::to_string(*e.m) : "?") + ", file has N=" +
                      std::to_string(g.n()) + " M=" + std::to_string(g.m()));
    }
    return g;
  }

  std::map<std::string, DatasetEntry> entries_;
};

}  // namespace linkpred::bench
