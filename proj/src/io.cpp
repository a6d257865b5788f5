#include "unipro/io.hpp"

#include <fstream>
#include <map>

namespace unipro {

nlohmann::json scalar_to_json(const PAdic& x) {
  if (x.is_literal()) return x.literal();
  if (!x.is_zero() && x.valuation() < 0) {
    throw PreconditionError("only integral coordinates can be written to an algebra file");
  }
  if (auto small = to_small_integer(x); small && *small > -(1LL << 53) && *small < (1LL << 53)) return *small;
  return to_digit_string(x, x.context()->precision());
}

PAdic scalar_from_json(const PAdicContext& ctx, const nlohmann::json& j) {
  if (j.is_number_integer()) return PAdic(ctx, j.get<long long>());
  if (j.is_string()) return parse_scalar(ctx, j.get<std::string>());
  throw PreconditionError("coordinate must be an integer or a p-adic digit string");
}

nlohmann::json algebra_to_json(const LieAlgebraZp& L) {
  nlohmann::json j;
  j["p"] = L.context().prime();
  j["precision"] = L.context().precision();
  j["rank"] = L.rank();
  j["basis"] = L.basis_names();
  j["brackets"] = nlohmann::json::array();
  for (int a = 0; a < L.rank(); ++a)
    for (int b = a + 1; b < L.rank(); ++b) {
      const LieVector c = L.basis_bracket(a, b);
      bool nonzero = false;
      nlohmann::json coords = nlohmann::json::array();
      for (Eigen::Index l = 0; l < c.size(); ++l) {
        nonzero = nonzero || !c(l).is_zero();
        coords.push_back(scalar_to_json(c(l)));
      }
      if (nonzero) j["brackets"].push_back({{"i", a}, {"j", b}, {"coords", coords}});
    }
  return j;
}

LieAlgebraZp algebra_from_json(const nlohmann::json& j) {
  try {
    const auto p = j.at("p").get<std::uint32_t>();
    const int n = j.at("precision").get<int>();
    const int rank = j.at("rank").get<int>();
    const auto names = j.at("basis").get<std::vector<std::string>>();
    if (static_cast<int>(names.size()) != rank) throw PreconditionError("basis length differs from rank");
    const PAdicContext& ctx = PAdicContext::get(p, n);
    std::vector<std::vector<LieVector>> table(static_cast<std::size_t>(rank),
                                              std::vector<LieVector>(static_cast<std::size_t>(rank),
                                                                     zero_vector(ctx, rank)));
    std::map<std::pair<int, int>, bool> seen;
    for (const auto& entry : j.at("brackets")) {
      const int a = entry.at("i").get<int>();
      const int b = entry.at("j").get<int>();
      if (a < 0 || b < 0 || a >= rank || b >= rank) throw PreconditionError("bracket index out of range");
      const auto& coords = entry.at("coords");
      if (static_cast<int>(coords.size()) != rank) throw PreconditionError("bracket coords have the wrong length");
      LieVector v(rank);
      for (int l = 0; l < rank; ++l) v(l) = scalar_from_json(ctx, coords[static_cast<std::size_t>(l)]);
      if (seen[{a, b}]) throw PreconditionError("pair listed twice");
      seen[{a, b}] = true;
      table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
      // A pair given in one orientation only implies its partner.
      if (!seen[{b, a}]) table[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = -v;
    }
    LieAlgebraZp L = LieAlgebraZp::from_full_table(ctx, names, table);
    const JacobiReport rep = jacobi_check(L);
    if (!rep.ok) {
      throw PreconditionError("Jacobi identity fails on basis triple (" + std::to_string(rep.i) + ", " +
                              std::to_string(rep.j) + ", " + std::to_string(rep.h) + ")");
    }
    return L;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed algebra file: ") + e.what());
  }
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("cannot parse " + path + ": " + e.what());
  }
}

}  // namespace unipro
