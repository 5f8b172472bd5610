#pragma once

// File formats: keyed ensembles and circuits as human-diffable JSON.

#include "qrlab/locc.hpp"
#include "qrlab/resource.hpp"

#include <string>

namespace qrlab {

// {"dims": [dA, dB], "key_len": n, "states": {"<bits>": [[re, im], ...]}}
// with entries in row-major, A-major order.
KeyedEnsemble load_ensemble(const std::string& path);
void save_ensemble(const KeyedEnsemble& ensemble, const std::string& path);

KeyedEnsemble ensemble_from_json_text(const std::string& text);
std::string ensemble_to_json_text(const KeyedEnsemble& ensemble);

// {"n_a":., "t_a":., "n_b":., "t_b":., "c":., "gate_budget":.,
//  "rounds": [{"a": [{"gate":"CNOT","controls":[0],"targets":[2]}, ...],
//              "b": [...]}]}
LoccCircuit load_circuit(const std::string& path);
void save_circuit(const LoccCircuit& circuit, const std::string& path);

LoccCircuit circuit_from_json_text(const std::string& text);
std::string circuit_to_json_text(const LoccCircuit& circuit);

std::string key_to_bits(std::uint32_t key, int key_len);
std::uint32_t bits_to_key(const std::string& bits);

}  // namespace qrlab
