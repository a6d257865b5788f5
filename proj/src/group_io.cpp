#include "unipro/group_io.hpp"

#include <filesystem>

#include "unipro/io.hpp"

namespace unipro {

namespace {

const char* path_name(BchPath p) {
  switch (p) {
    case BchPath::General: return "general";
    case BchPath::Metabelian: return "metabelian";
    default: return "auto";
  }
}

BchPath path_from_name(const std::string& s) {
  if (s == "general") return BchPath::General;
  if (s == "metabelian") return BchPath::Metabelian;
  if (s == "auto") return BchPath::Auto;
  throw PreconditionError("unknown BCH path '" + s + "'");
}

}  // namespace

nlohmann::json group_to_json(const UniformGroup& G, const std::string& algebra_ref) {
  nlohmann::json j;
  if (algebra_ref.empty()) {
    j["algebra"] = algebra_to_json(G.algebra());
  } else {
    j["algebra"] = algebra_ref;
  }
  j["p"] = G.context().prime();
  j["precision"] = G.context().precision();
  j["bch_path"] = path_name(G.engine().path());
  j["bch_degree"] = G.engine().degree();
  j["certificate"] = {{"v0", G.engine().certificate().v0}, {"degree", G.engine().certificate().degree}};
  if (G.has_split()) {
    j["split"] = {{"index", G.split_index()}, {"sign", G.split_sign()}};
  } else {
    j["split"] = nullptr;
  }
  if (G.family()) j["family"] = {{"m", G.family()->k}, {"d", to_digit_string(G.family()->d, G.context().precision())}};
  return j;
}

UniformGroup group_from_json(const nlohmann::json& j, const std::string& base_dir) {
  try {
    const auto p = j.at("p").get<std::uint32_t>();
    const int n = j.at("precision").get<int>();
    const PAdicContext& ctx = PAdicContext::get(p, n);
    std::optional<UniformGroup> G;
    if (j.contains("family")) {
      const auto& f = j.at("family");
      G.emplace(UniformGroup::from_family(FamilyParams(ctx, f.at("m").get<int>(), parse_scalar(ctx, f.at("d").get<std::string>()))));
    } else {
      const auto& a = j.at("algebra");
      const nlohmann::json alg = a.is_string() ? load_json((std::filesystem::path(base_dir) / a.get<std::string>()).string()) : a;
      G.emplace(algebra_from_json(alg), path_from_name(j.value("bch_path", "auto")));
    }
    if (G->context().prime() != p || G->context().precision() != n) throw ConsistencyError("descriptor context differs from the algebra's");
    if (j.contains("bch_degree") && j.at("bch_degree").get<int>() != G->engine().degree())
      throw ConsistencyError("recorded BCH degree differs from the certified one");
    if (j.contains("split")) {
      const auto& s = j.at("split");
      if (s.is_null() != !G->has_split()) throw ConsistencyError("recorded split chart availability differs");
      if (!s.is_null() && (s.at("index").get<int>() != G->split_index() || s.at("sign").get<int>() != G->split_sign()))
        throw ConsistencyError("recorded split chart differs from the rebuilt one");
    }
    return std::move(*G);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed group descriptor: ") + e.what());
  }
}

nlohmann::json element_to_json(const UniformGroup& G, const GroupElement& g) {
  nlohmann::json coords = nlohmann::json::array();
  for (int i = 0; i < G.rank(); ++i) coords.push_back(to_digit_string(g.coords(i), G.context().precision()));
  return {{"chart", g.chart == Chart::Split ? "split" : "bch"}, {"coords", coords}};
}

GroupElement element_from_json(const UniformGroup& G, const nlohmann::json& j) {
  try {
    const std::string chart = j.at("chart").get<std::string>();
    if (chart != "bch" && chart != "split") throw PreconditionError("unknown chart '" + chart + "'");
    const auto& c = j.at("coords");
    if (static_cast<int>(c.size()) != G.rank()) throw DimensionError("element has the wrong number of coordinates");
    LieVector v = G.algebra().zero();
    for (int i = 0; i < G.rank(); ++i) v(i) = scalar_from_json(G.context(), c[static_cast<std::size_t>(i)]);
    return G.element(v, chart == "split" ? Chart::Split : Chart::Bch);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed group element: ") + e.what());
  }
}

}  // namespace unipro
