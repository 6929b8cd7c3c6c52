#include "hcb/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hcb/errors.hpp"

namespace hcb {
namespace {

using nlohmann::json;

Edge normalized(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

int parse_size_suffix(const std::string& name, const std::string& prefix) {
  const std::string digits = name.substr(prefix.size());
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("example_lattice: malformed catalog name '" + name + "'");
  }
  return std::stoi(digits);
}

std::vector<Edge> make_edges(std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back(normalized(a, b));
  return edges;
}

// Irregular planar graph on 16 sites: 6-site system block {0..5}, 10-site
// bath, single coupling edge (4,11). Mixed coordination numbers and loop
// lengths keep the spectrum non-integrable.
std::pair<Lattice, Bipartition> irregular16() {
  Lattice lattice;
  lattice.n_sites = 16;
  lattice.edges = make_edges({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5},
                              {0, 3},
                              {4, 11},
                              {6, 7}, {6, 9}, {7, 8}, {7, 9}, {8, 10}, {9, 10}, {9, 12}, {10, 11},
                              {11, 12}, {11, 14}, {12, 13}, {13, 14}, {13, 15}, {14, 15}, {8, 11}});
  Bipartition bipartition = make_bipartition(lattice, {0, 1, 2, 3, 4, 5});
  return {lattice, bipartition};
}

// Denser 18-site variant: same 6-site system block, 12-site bath with mixed
// loop lengths, two coupling edges (4,11) and (5,13).
std::pair<Lattice, Bipartition> irregular18() {
  Lattice lattice;
  lattice.n_sites = 18;
  lattice.edges = make_edges({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5},
                              {0, 3},
                              {4, 11}, {5, 13},
                              {6, 7}, {6, 9}, {7, 8}, {7, 9}, {8, 10}, {8, 11}, {9, 10}, {9, 12},
                              {10, 11}, {10, 17}, {11, 12}, {11, 14}, {12, 13}, {12, 16},
                              {13, 14}, {13, 15}, {14, 15}, {14, 16}, {15, 16}, {16, 17}});
  Bipartition bipartition = make_bipartition(lattice, {0, 1, 2, 3, 4, 5});
  return {lattice, bipartition};
}

// 21-site analogue with an 8-site system corner and coupling edge (4,11).
std::pair<Lattice, Bipartition> irregular21() {
  Lattice lattice;
  lattice.n_sites = 21;
  lattice.edges = make_edges({{0, 1},  {0, 2},  {1, 2},  {1, 3},  {2, 4},   {3, 4},   {3, 5},
                              {4, 6},  {5, 6},  {5, 7},  {6, 7},  {0, 4},
                              {4, 11},
                              {8, 9},  {8, 11}, {9, 10}, {9, 11}, {10, 12}, {11, 12}, {11, 13},
                              {12, 14}, {13, 14}, {13, 15}, {14, 16}, {15, 16}, {15, 17},
                              {16, 18}, {17, 18}, {17, 19}, {18, 20}, {19, 20}, {10, 14}});
  Bipartition bipartition = make_bipartition(lattice, {0, 1, 2, 3, 4, 5, 6, 7});
  return {lattice, bipartition};
}

// irregular21 plus four extra bath sites hanging off the far bath corner.
std::pair<Lattice, Bipartition> irregular25() {
  auto [lattice, bipartition] = irregular21();
  lattice.n_sites = 25;
  for (Edge e : make_edges({{19, 21}, {21, 22}, {20, 22}, {22, 23}, {23, 24}, {18, 24}, {21, 24}})) {
    lattice.edges.push_back(e);
  }
  return {lattice, make_bipartition(lattice, bipartition.system_sites)};
}

std::pair<Lattice, Bipartition> chain(int n) {
  if (n < 2) throw ConfigError("example_lattice: chain needs at least 2 sites");
  Lattice lattice;
  lattice.n_sites = n;
  for (int i = 0; i + 1 < n; ++i) lattice.edges.push_back({i, i + 1});
  std::vector<int> system(static_cast<std::size_t>(n / 2));
  for (int i = 0; i < n / 2; ++i) system[static_cast<std::size_t>(i)] = i;
  return {lattice, make_bipartition(lattice, std::move(system))};
}

std::pair<Lattice, Bipartition> ladder(int rungs) {
  if (rungs < 2) throw ConfigError("example_lattice: ladder needs at least 2 rungs");
  Lattice lattice;
  lattice.n_sites = 2 * rungs;
  for (int r = 0; r < rungs; ++r) {
    lattice.edges.push_back({2 * r, 2 * r + 1});
    if (r + 1 < rungs) {
      lattice.edges.push_back({2 * r, 2 * r + 2});
      lattice.edges.push_back({2 * r + 1, 2 * r + 3});
    }
  }
  std::vector<int> system;
  for (int i = 0; i < rungs / 2 * 2; ++i) system.push_back(i);
  return {lattice, make_bipartition(lattice, std::move(system))};
}

}  // namespace

void Lattice::validate() const {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw ValidationError("Lattice: n_sites must be in [1, " + std::to_string(kMaxSites) +
                          "], got " + std::to_string(n_sites));
  }
  if (!(hopping_j > 0.0)) {
    throw ValidationError("Lattice: J must be positive, got " + std::to_string(hopping_j));
  }
  std::set<Edge> seen;
  for (const Edge& e : edges) {
    if (e.first == e.second) {
      throw ValidationError("Lattice: self-loop at site " + std::to_string(e.first));
    }
    if (e.first < 0 || e.second >= n_sites) {
      throw ValidationError("Lattice: edge (" + std::to_string(e.first) + "," +
                            std::to_string(e.second) + ") out of range");
    }
    if (!seen.insert(normalized(e.first, e.second)).second) {
      throw ValidationError("Lattice: duplicate edge (" + std::to_string(e.first) + "," +
                            std::to_string(e.second) + ")");
    }
  }
}

Bipartition make_bipartition(const Lattice& lattice, std::vector<int> system_sites) {
  lattice.validate();
  std::sort(system_sites.begin(), system_sites.end());
  if (std::adjacent_find(system_sites.begin(), system_sites.end()) != system_sites.end()) {
    throw ValidationError("Bipartition: duplicate system site");
  }
  if (system_sites.empty()) throw ValidationError("Bipartition: empty system part");
  if (!system_sites.empty() &&
      (system_sites.front() < 0 || system_sites.back() >= lattice.n_sites)) {
    throw ValidationError("Bipartition: system site out of range");
  }
  std::vector<bool> in_system(static_cast<std::size_t>(lattice.n_sites), false);
  for (int s : system_sites) in_system[static_cast<std::size_t>(s)] = true;

  Bipartition out;
  out.system_sites = std::move(system_sites);
  for (int i = 0; i < lattice.n_sites; ++i) {
    if (!in_system[static_cast<std::size_t>(i)]) out.bath_sites.push_back(i);
  }
  if (out.bath_sites.empty()) throw ValidationError("Bipartition: empty bath part");
  for (const Edge& e : lattice.edges) {
    if (in_system[static_cast<std::size_t>(e.first)] !=
        in_system[static_cast<std::size_t>(e.second)]) {
      out.coupling_edges.push_back(normalized(e.first, e.second));
    }
  }
  return out;
}

std::vector<Edge> internal_edges(const Lattice& lattice, const std::vector<int>& sites) {
  std::vector<bool> inside(static_cast<std::size_t>(lattice.n_sites), false);
  for (int s : sites) inside[static_cast<std::size_t>(s)] = true;
  std::vector<Edge> out;
  for (const Edge& e : lattice.edges) {
    if (inside[static_cast<std::size_t>(e.first)] && inside[static_cast<std::size_t>(e.second)]) {
      out.push_back(e);
    }
  }
  return out;
}

Lattice sublattice(const Lattice& lattice, const std::vector<int>& sites) {
  std::vector<int> position(static_cast<std::size_t>(lattice.n_sites), -1);
  for (std::size_t k = 0; k < sites.size(); ++k) {
    position[static_cast<std::size_t>(sites[k])] = static_cast<int>(k);
  }
  Lattice out;
  out.n_sites = static_cast<int>(sites.size());
  out.hopping_j = lattice.hopping_j;
  out.interaction_u = lattice.interaction_u;
  for (const Edge& e : lattice.edges) {
    const int a = position[static_cast<std::size_t>(e.first)];
    const int b = position[static_cast<std::size_t>(e.second)];
    if (a >= 0 && b >= 0) out.edges.push_back(normalized(a, b));
  }
  return out;
}

std::pair<Lattice, Bipartition> load_lattice(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("load_lattice: cannot open " + config_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("load_lattice: " + config_path.string() + ": " + e.what());
  }
  Lattice lattice;
  std::vector<int> system_sites;
  try {
    lattice.n_sites = doc.at("n_sites").get<int>();
    lattice.hopping_j = doc.at("J").get<double>();
    lattice.interaction_u = doc.at("U").get<double>();
    for (const auto& pair : doc.at("edges")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ConfigError("load_lattice: each edge must be a 2-array");
      }
      lattice.edges.push_back(normalized(pair[0].get<int>(), pair[1].get<int>()));
    }
    system_sites = doc.at("system_sites").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ConfigError("load_lattice: " + config_path.string() + ": " + e.what());
  }
  lattice.validate();
  Bipartition bipartition = make_bipartition(lattice, std::move(system_sites));
  return {lattice, bipartition};
}

void save_lattice(const Lattice& lattice, const Bipartition& bipartition,
                  const std::filesystem::path& config_path) {
  json doc;
  doc["n_sites"] = lattice.n_sites;
  doc["J"] = lattice.hopping_j;
  doc["U"] = lattice.interaction_u;
  json edges = json::array();
  for (const Edge& e : lattice.edges) edges.push_back({e.first, e.second});
  doc["edges"] = std::move(edges);
  doc["system_sites"] = bipartition.system_sites;
  std::ofstream out(config_path);
  if (!out) throw ConfigError("save_lattice: cannot write " + config_path.string());
  out << doc.dump(2) << "\n";
}

std::pair<Lattice, Bipartition> example_lattice(const std::string& name) {
  if (name == "irregular16") return irregular16();
  if (name == "irregular18") return irregular18();
  if (name == "irregular21") return irregular21();
  if (name == "irregular25") return irregular25();
  if (name.rfind("chain_", 0) == 0) return chain(parse_size_suffix(name, "chain_"));
  if (name.rfind("ladder_", 0) == 0) return ladder(parse_size_suffix(name, "ladder_"));
  throw ConfigError("example_lattice: unknown catalog name '" + name + "'");
}

bool cut_disconnects(const Lattice& lattice, const Bipartition& bipartition) {
  std::set<Edge> cut(bipartition.coupling_edges.begin(), bipartition.coupling_edges.end());
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(lattice.n_sites));
  for (const Edge& e : lattice.edges) {
    if (cut.count(normalized(e.first, e.second))) continue;
    adjacency[static_cast<std::size_t>(e.first)].push_back(e.second);
    adjacency[static_cast<std::size_t>(e.second)].push_back(e.first);
  }
  std::vector<bool> reached(static_cast<std::size_t>(lattice.n_sites), false);
  std::vector<int> stack(bipartition.system_sites);
  for (int s : stack) reached[static_cast<std::size_t>(s)] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adjacency[static_cast<std::size_t>(v)]) {
      if (!reached[static_cast<std::size_t>(w)]) {
        reached[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  for (int b : bipartition.bath_sites) {
    if (reached[static_cast<std::size_t>(b)]) return false;
  }
  return true;
}

}  // namespace hcb
