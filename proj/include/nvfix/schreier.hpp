#pragma once

// Stabilizers of lattice actions on finite sets.

#include <cstddef>
#include <deque>
#include <map>
#include <vector>

#include "nvfix/exact.hpp"

namespace nvfix {

template <class State> struct LatticeOrbit {
  std::vector<State> states;          // states[0] is the start
  std::vector<IntVector> transversal; // coordinates reaching each state
  std::vector<IntVector> stabilizer;  // generators of the stabilizer of start

  // Full-rank lattice (in coordinate space) of the stabilizer.
  Lattice stabilizer_lattice(std::size_t dim) const {
    std::vector<RatVector> g;
    for (const auto &v : stabilizer)
      g.push_back(to_rational(v));
    return Lattice(dim, g);
  }
};

// Orbit of `start` under Z^dim, where basis vector k acts by step(state, k).
// The action must be that of an abelian group with finite orbits.
template <class State, class Step>
LatticeOrbit<State> lattice_orbit(std::size_t dim, State start, Step step) {
  LatticeOrbit<State> out;
  std::map<State, std::size_t> index;
  index.emplace(start, 0);
  out.states.push_back(start);
  out.transversal.push_back(IntVector(dim));
  for (std::size_t p = 0; p < out.states.size(); ++p) {
    for (std::size_t k = 0; k < dim; ++k) {
      State next = step(out.states[p], k);
      IntVector reach = out.transversal[p];
      reach[k] += 1;
      auto it = index.find(next);
      if (it == index.end()) {
        index.emplace(next, out.states.size());
        out.states.push_back(std::move(next));
        out.transversal.push_back(std::move(reach));
      } else {
        // Schreier generator: v_p + e_k - v_q
        IntVector gen(dim);
        bool nonzero = false;
        for (std::size_t j = 0; j < dim; ++j) {
          gen[j] = reach[j] - out.transversal[it->second][j];
          nonzero = nonzero || gen[j] != 0;
        }
        if (nonzero)
          out.stabilizer.push_back(std::move(gen));
      }
    }
  }
  return out;
}

} // namespace nvfix
