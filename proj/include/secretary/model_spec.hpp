#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "secretary/builders.hpp"

namespace secretary {

/// JSON model-spec schema:
///   { "kind": "classic"|"samples"|"binary"|"markov", "n": int,
///     "k": int?, "p": float?, "p_prime": float?,
///     "chain": {"states": [...], "initial": [...], "transition": [[...]]}? }
inline ModelSpec parse_model_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("model spec: expected a JSON object");
  ModelSpec spec;

  const auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string())
    throw std::invalid_argument("model spec: missing string field 'kind'");
  const auto kind = model_kind_from_string(kind_it->get<std::string>());
  if (!kind || *kind == ModelKind::custom)
    throw std::invalid_argument("model spec: unknown kind '" + kind_it->get<std::string>() + "'");
  spec.kind = *kind;

  const auto n_it = j.find("n");
  if (n_it == j.end() || !n_it->is_number_integer())
    throw std::invalid_argument("model spec: missing integer field 'n'");
  spec.n = n_it->get<int>();
  if (spec.n < 1) throw std::invalid_argument("model spec: n must be >= 1");

  if (j.contains("k")) spec.k = j.at("k").get<int>();
  if (j.contains("p")) spec.p = j.at("p").get<double>();
  if (j.contains("p_prime")) spec.p_prime = j.at("p_prime").get<double>();

  if (spec.kind == ModelKind::markov) {
    const auto chain_it = j.find("chain");
    if (chain_it == j.end() || !chain_it->is_object())
      throw std::invalid_argument("model spec: markov kind needs a 'chain' object");
    MarkovChainSpec chain;
    chain.horizon = spec.n;
    chain.states = chain_it->at("states").get<std::vector<double>>();
    chain.initial = chain_it->at("initial").get<std::vector<double>>();
    chain.transition = chain_it->at("transition").get<std::vector<std::vector<double>>>();
    chain.validate();
    spec.chain = std::move(chain);
  }
  return spec;
}

inline ModelSpec parse_model_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("model spec: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("model spec: JSON parse error in '" + path + "': " + e.what());
  }
  return parse_model_spec(j);
}

}  // namespace secretary
