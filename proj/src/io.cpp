#include "qrlab/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrlab {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

GateKind gate_kind_from_name(const std::string& name) {
  for (GateKind k : {GateKind::H, GateKind::X, GateKind::Z, GateKind::S, GateKind::CNOT,
                     GateKind::CZ, GateKind::TOFFOLI})
    if (gate_name(k) == name) return k;
  throw std::runtime_error("unknown gate: " + name);
}

json gate_to_json(const Gate& g) {
  return json{{"gate", gate_name(g.kind)}, {"controls", g.controls}, {"targets", g.targets}};
}

Gate gate_from_json(const json& j) {
  Gate g;
  g.kind = gate_kind_from_name(j.at("gate").get<std::string>());
  if (j.contains("controls")) g.controls = j.at("controls").get<std::vector<int>>();
  if (j.contains("targets")) g.targets = j.at("targets").get<std::vector<int>>();
  return g;
}

}  // namespace

std::string key_to_bits(std::uint32_t key, int key_len) {
  std::string bits(static_cast<std::size_t>(key_len), '0');
  for (int i = 0; i < key_len; ++i)
    if ((key >> (key_len - 1 - i)) & 1) bits[i] = '1';
  return bits;
}

std::uint32_t bits_to_key(const std::string& bits) {
  std::uint32_t key = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw std::runtime_error("bad key bitstring: " + bits);
    key = (key << 1) | static_cast<std::uint32_t>(ch - '0');
  }
  return key;
}

std::string ensemble_to_json_text(const KeyedEnsemble& ensemble) {
  json states = json::object();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const ComplexMatrix& m = ensemble.states[i].mat();
    json entries = json::array();
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c)
        entries.push_back({m(r, c).real(), m(r, c).imag()});
    states[key_to_bits(ensemble.keys[i], ensemble.key_len)] = std::move(entries);
  }
  json doc{{"dims", {ensemble.dim_a, ensemble.dim_b}},
           {"key_len", ensemble.key_len},
           {"states", std::move(states)}};
  return doc.dump(2) + "\n";
}

KeyedEnsemble ensemble_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("ensemble parse error: ") + e.what());
  }
  auto dims = doc.at("dims").get<std::vector<Index>>();
  if (dims.size() != 2) throw std::runtime_error("ensemble: dims must be [dA, dB]");
  int key_len = doc.at("key_len").get<int>();
  Index d = dims[0] * dims[1];

  std::vector<std::uint32_t> keys;
  std::vector<DensityMatrix> states;
  for (auto it = doc.at("states").begin(); it != doc.at("states").end(); ++it) {
    const std::string& bits = it.key();
    if (static_cast<int>(bits.size()) != key_len)
      throw std::runtime_error("ensemble: key '" + bits + "' length != key_len");
    auto entries = it.value().get<std::vector<std::array<double, 2>>>();
    if (static_cast<Index>(entries.size()) != d * d)
      throw std::runtime_error("ensemble: state '" + bits + "' has " +
                               std::to_string(entries.size()) + " entries, expected " +
                               std::to_string(d * d));
    ComplexMatrix m(d, d);
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c) {
        const auto& e = entries[static_cast<std::size_t>(r * d + c)];
        m(r, c) = std::complex<double>(e[0], e[1]);
      }
    try {
      states.emplace_back(std::move(m));
    } catch (const std::exception& e) {
      throw std::runtime_error("ensemble: state '" + bits + "' invalid: " + e.what());
    }
    keys.push_back(bits_to_key(bits));
  }
  return KeyedEnsemble(key_len, std::move(keys), std::move(states), dims[0], dims[1]);
}

KeyedEnsemble load_ensemble(const std::string& path) {
  return ensemble_from_json_text(read_file(path));
}

void save_ensemble(const KeyedEnsemble& ensemble, const std::string& path) {
  write_file(path, ensemble_to_json_text(ensemble));
}

std::string circuit_to_json_text(const LoccCircuit& circuit) {
  json rounds = json::array();
  for (int r = 0; r < circuit.rounds(); ++r) {
    json a = json::array(), b = json::array();
    for (const Gate& g : circuit.a_rounds()[r]) a.push_back(gate_to_json(g));
    for (const Gate& g : circuit.b_rounds()[r]) b.push_back(gate_to_json(g));
    rounds.push_back(json{{"a", std::move(a)}, {"b", std::move(b)}});
  }
  json doc{{"n_a", circuit.n_a()}, {"t_a", circuit.t_a()}, {"n_b", circuit.n_b()},
           {"t_b", circuit.t_b()}, {"c", circuit.c_bits()},
           {"gate_budget", circuit.gate_budget()}, {"rounds", std::move(rounds)}};
  return doc.dump(2) + "\n";
}

LoccCircuit circuit_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("circuit parse error: ") + e.what());
  }
  std::vector<std::vector<Gate>> a_rounds, b_rounds;
  for (const json& r : doc.at("rounds")) {
    std::vector<Gate> a, b;
    for (const json& g : r.at("a")) a.push_back(gate_from_json(g));
    for (const json& g : r.at("b")) b.push_back(gate_from_json(g));
    a_rounds.push_back(std::move(a));
    b_rounds.push_back(std::move(b));
  }
  return LoccCircuit(doc.at("n_a").get<int>(), doc.at("t_a").get<int>(),
                     doc.at("n_b").get<int>(), doc.at("t_b").get<int>(),
                     doc.at("c").get<int>(), std::move(a_rounds), std::move(b_rounds),
                     doc.value("gate_budget", 64));
}

LoccCircuit load_circuit(const std::string& path) {
  return circuit_from_json_text(read_file(path));
}

void save_circuit(const LoccCircuit& circuit, const std::string& path) {
  write_file(path, circuit_to_json_text(circuit));
}

}  // namespace qrlab
