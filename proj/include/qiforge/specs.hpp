#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qiforge/bs_model.hpp"
#include "qiforge/errors.hpp"
#include "qiforge/groups.hpp"
#include "qiforge/qi_maps.hpp"
#include "qiforge/uf_chain.hpp"

namespace qiforge {

struct ParsedCall {
  std::string name;
  std::vector<std::string> args;
};

/// Splits "name(a,b,nested(c,d))" into name and top-level arguments.
inline ParsedCall parse_call(const std::string& spec) {
  auto open = spec.find('(');
  if (open == std::string::npos) return ParsedCall{spec, {}};
  if (spec.back() != ')') throw spec_error("malformed spec '" + spec + "'");
  ParsedCall out;
  out.name = spec.substr(0, open);
  std::string body = spec.substr(open + 1, spec.size() - open - 2);
  std::string cur;
  int depth = 0;
  for (char c : body) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.args.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.args.empty()) out.args.push_back(cur);
  return out;
}

inline long long spec_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw spec_error("not an integer: '" + s + "'");
    return v;
  } catch (const spec_error&) {
    throw;
  } catch (...) {
    throw spec_error("not an integer: '" + s + "'");
  }
}

// ---------------------------------------------------------------------------
// Map specs
// ---------------------------------------------------------------------------

using MapZZ = QIMap<FreeAbelianGroup, FreeAbelianGroup>;
using MapCZ = QIMap<CyclicProductGroup, FreeAbelianGroup>;
using MapCC = QIMap<CyclicProductGroup, CyclicProductGroup>;
using MapBB = QIMap<BaumslagSolitarGroup, BaumslagSolitarGroup>;
using MapAny = std::variant<MapZZ, MapCZ, MapCC, MapBB>;

inline MapAny compose_any(const MapAny& f, const MapAny& g) {
  return std::visit(
      [](const auto& fm, const auto& gm) -> MapAny {
        using FS = typename std::decay_t<decltype(fm)>::Source;
        using GT_ = typename std::decay_t<decltype(gm)>::Target;
        if constexpr (std::is_same_v<FS, GT_>) {
          return compose(fm, gm);
        } else {
          throw spec_error("comp: incompatible source/target families");
        }
      },
      f, g);
}

/// Map spec grammar (see README): id(GROUP), floor(n), floorc(n,coord,m),
/// incl(n), incl2(n), inclc(n,k), inclfloor(n), extendfloor(n), proj(k),
/// chart(k), fc(m,n), comp(F,G).
inline MapAny parse_map(const std::string& spec) {
  ParsedCall call = parse_call(spec);
  auto want = [&](std::size_t n) {
    if (call.args.size() != n)
      throw spec_error("map spec '" + call.name + "' expects " + std::to_string(n) +
                       " argument(s)");
  };
  if (call.name == "id") {
    want(1);
    AnyGroup g = parse_group(call.args[0]);
    if (auto* fa = std::get_if<FreeAbelianGroup>(&g)) return identity_map(*fa);
    if (auto* bs = std::get_if<BaumslagSolitarGroup>(&g)) return identity_map(*bs);
    if (auto* cy = std::get_if<CyclicProductGroup>(&g)) return identity_map(*cy);
    throw spec_error("id: unsupported group " + call.args[0]);
  }
  if (call.name == "floor") {
    want(1);
    return floor_map_Z(spec_int(call.args[0]));
  }
  if (call.name == "floorc") {
    want(3);
    return floor_map_Zm(spec_int(call.args[0]), static_cast<int>(spec_int(call.args[1])),
                        static_cast<int>(spec_int(call.args[2])));
  }
  if (call.name == "incl") {
    want(1);
    return inclusion_map({spec_int(call.args[0])}, FreeAbelianGroup(1));
  }
  if (call.name == "incl2") {
    want(1);
    return inclusion_map({spec_int(call.args[0]), 1}, FreeAbelianGroup(2));
  }
  if (call.name == "inclc") {
    want(2);
    return inclusion_map_cyclic(spec_int(call.args[0]),
                                CyclicProductGroup(static_cast<int>(spec_int(call.args[1]))));
  }
  if (call.name == "inclfloor") {
    want(1);
    long long n = spec_int(call.args[0]);
    return compose(inclusion_map({n}, FreeAbelianGroup(1)), floor_map_Z(n));
  }
  if (call.name == "extendfloor") {
    want(1);
    return extend_floor(FreeAbelianGroup(1), spec_int(call.args[0]));
  }
  if (call.name == "proj") {
    want(1);
    return projection_map(static_cast<int>(spec_int(call.args[0])));
  }
  if (call.name == "chart") {
    want(1);
    return cyclic_chart(static_cast<int>(spec_int(call.args[0])));
  }
  if (call.name == "fc") {
    want(2);
    return bs_floor_map(BaumslagSolitarGroup(static_cast<int>(spec_int(call.args[0]))),
                        spec_int(call.args[1]));
  }
  if (call.name == "comp") {
    want(2);
    return compose_any(parse_map(call.args[0]), parse_map(call.args[1]));
  }
  throw spec_error("unknown map spec '" + call.name + "'");
}

inline std::string map_name(const MapAny& m) {
  return std::visit([](const auto& f) { return f.name; }, m);
}

// ---------------------------------------------------------------------------
// Chain specs (free-abelian groups)
// ---------------------------------------------------------------------------

/// Chain spec grammar: fund, sub(n), complement(n), push(MAP),
/// pushminusfund(MAP), edgeboundary(pair), edgeboundary(succ).
/// `i_max` sizes the evaluation windows of the lazy chains.
inline UFChain<FreeAbelianGroup> parse_chain(const std::string& spec, const FreeAbelianGroup& g,
                                             long long i_max,
                                             std::size_t budget = kDefaultBallBudget) {
  ParsedCall call = parse_call(spec);
  auto scales_of = [&](long long n) {
    std::vector<long long> scales(g.rank(), 1);
    scales[0] = n;
    return scales;
  };
  if (call.name == "fund") return fundamental_chain(g);
  if (call.name == "sub") return sublattice_indicator(g, scales_of(spec_int(call.args.at(0))));
  if (call.name == "complement")
    return difference(fundamental_chain(g),
                      sublattice_indicator(g, scales_of(spec_int(call.args.at(0)))));
  if (call.name == "push" || call.name == "pushminusfund") {
    MapAny m = parse_map(call.args.at(0));
    auto* zz = std::get_if<MapZZ>(&m);
    if (!zz || !(zz->target == g))
      throw spec_error("chain spec '" + call.name + "' needs a map into " + g.name());
    auto window = std::make_shared<const Ball<FreeAbelianGroup>>(
        ball(g, static_cast<int>(g.rank() * (i_max + 1)), budget));
    auto chain = pushforward_chain(*zz, window, budget);
    if (call.name == "push") return chain;
    return difference(chain, fundamental_chain(g));
  }
  if (call.name == "edgeboundary") {
    if (g.rank() != 1) throw spec_error("edgeboundary chains live on Z");
    auto window = std::make_shared<const Ball<FreeAbelianGroup>>(
        ball(g, static_cast<int>(i_max + 2), budget));
    if (call.args.at(0) == "pair") return boundary_1(paired_successor_edges(g), window);
    if (call.args.at(0) == "succ") return boundary_1(successor_edges(g), window);
    throw spec_error("edgeboundary: expected 'pair' or 'succ'");
  }
  throw spec_error("unknown chain spec '" + call.name + "'");
}

}  // namespace qiforge
