#pragma once

#include <string>
#include <vector>

#include "probint/model.hpp"

namespace probint::io {

// Instance files are JSON:
//   {
//     "coordinates": [
//       {"name": "xi1", "values": [0, 1], "probs": ["1/2", "1/2"]},
//       {"name": "xi2", "values": ["a", "b"], "probs": "uniform"}
//     ],
//     "events": [
//       {"name": "A1", "predicate": "x[1] == 1"},
//       {"name": "A2", "vars": [1, 2], "tuples": [[1, "b"]]}
//     ]
//   }
// Rationals are fraction strings parsed exactly. Exactly one of
// predicate/tuples per event; tuples list satisfying assignments by atom
// value in vars order. Every ingested event is normalized to minimal
// support. Throws InputError with file/what context.
model::Instance parse_instance_json(const std::string& text);
model::Instance load_instance_file(const std::string& path);

// Inverse of parse_instance_json (events serialize as tuple lists).
// Used to archive counterexample instances byte-stably.
std::string instance_to_json_string(const model::Instance& instance);

// {0..c}^m with uniform atom probabilities 1/(c+1).
model::ProductSpace uniform_cube(int m, long long c);

// One predicate per line, '#' comments and blank lines skipped. Each line
// is a constraint describing the kept region; the returned events are the
// negations (the constraint violations), normalized.
std::vector<model::Event> parse_constraint_lines(const std::string& text,
                                                 const model::ProductSpace& cube);

}  // namespace probint::io
