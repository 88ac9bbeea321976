#include "adiqoc/models/mis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace adiqoc {

Graph Graph::ring(int n) {
    if (n < 2) throw std::invalid_argument("Graph::ring: need at least 2 nodes");
    Graph g;
    g.nodes = n;
    if (n == 2) {
        g.edges = {{0, 1}};
    } else {
        for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n});
    }
    return g;
}

bool Graph::isRing() const {
    const Graph ref = Graph::ring(nodes);
    if (edges.size() != ref.edges.size()) return false;
    auto canon = [](std::vector<std::pair<int, int>> e) {
        for (auto& [a, b] : e)
            if (a > b) std::swap(a, b);
        std::sort(e.begin(), e.end());
        return e;
    };
    return canon(edges) == canon(ref.edges);
}

void Graph::validate() const {
    if (nodes < 2) throw std::invalid_argument("Graph: need at least 2 nodes");
    if (nodes > 30) throw std::invalid_argument("Graph: too many nodes for dense simulation");
    for (const auto& [a, b] : edges)
        if (a < 0 || b < 0 || a >= nodes || b >= nodes || a == b)
            throw std::invalid_argument("Graph: invalid edge");
}

namespace {

bool independent(std::uint32_t mask, const Graph& graph) {
    for (const auto& [a, b] : graph.edges)
        if ((mask >> a & 1u) && (mask >> b & 1u)) return false;
    return true;
}

int popcount(std::uint32_t mask) { return __builtin_popcount(mask); }

} // namespace

BlockadeSubspace build_blockade_subspace(const Graph& graph) {
    graph.validate();
    BlockadeSubspace sub;
    sub.nodes = graph.nodes;
    const std::uint32_t total = 1u << graph.nodes;
    for (std::uint32_t mask = 0; mask < total; ++mask)
        if (independent(mask, graph)) sub.basisStates.push_back(mask);
    sub.dim = static_cast<int>(sub.basisStates.size());
    return sub;
}

Operator mis_hamiltonian_full(const MisSpec& spec, double t) {
    spec.graph.validate();
    const int n = spec.graph.nodes;
    const std::uint32_t total = 1u << n;
    const double omega = evaluate(spec.controls.byLabel("Omega"), t);
    const double delta = evaluate(spec.controls.byLabel("Delta"), t);

    Operator h = Operator::Zero(total, total);
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        double diag = -delta * (n - 2 * popcount(mask));
        for (const auto& [a, b] : spec.graph.edges)
            if ((mask >> a & 1u) && (mask >> b & 1u)) diag += spec.vR;
        h(mask, mask) = diag;
        for (int i = 0; i < n; ++i) h(mask ^ (1u << i), mask) += omega;
    }
    return h;
}

Operator mis_hamiltonian_projected(const MisSpec& spec, const BlockadeSubspace& subspace,
                                   double t) {
    const int n = spec.graph.nodes;
    const double omega = evaluate(spec.controls.byLabel("Omega"), t);
    const double delta = evaluate(spec.controls.byLabel("Delta"), t);

    std::map<std::uint32_t, int> index;
    for (int i = 0; i < subspace.dim; ++i) index[subspace.basisStates[i]] = i;

    Operator h = Operator::Zero(subspace.dim, subspace.dim);
    for (int col = 0; col < subspace.dim; ++col) {
        const std::uint32_t mask = subspace.basisStates[col];
        h(col, col) = -delta * (n - 2 * popcount(mask)); // interaction term vanishes here
        for (int i = 0; i < n; ++i) {
            const auto it = index.find(mask ^ (1u << i));
            if (it != index.end()) h(it->second, col) += omega;
        }
    }
    return h;
}

Matrix blockade_projector(const BlockadeSubspace& subspace) {
    const std::uint32_t total = 1u << subspace.nodes;
    Matrix p = Matrix::Zero(subspace.dim, total);
    for (int i = 0; i < subspace.dim; ++i) p(i, subspace.basisStates[i]) = 1.0;
    return p;
}

std::pair<std::uint32_t, std::uint32_t> ring_alternating_masks(int nodes) {
    if (nodes < 2 || nodes % 2 != 0)
        throw std::invalid_argument("ring_alternating_masks: requires an even ring");
    std::uint32_t even = 0;
    for (int i = 0; i < nodes; i += 2) even |= 1u << i;
    return {even, even << 1};
}

QuantumState mis_solution_state(const MisSpec& spec, const BlockadeSubspace& subspace) {
    if (!spec.graph.isRing() || spec.graph.nodes % 2 != 0)
        throw std::invalid_argument("mis_solution_state: target known only for even rings");
    const auto [m1, m2] = ring_alternating_masks(spec.graph.nodes);
    Vector psi = Vector::Zero(subspace.dim);
    for (int i = 0; i < subspace.dim; ++i)
        if (subspace.basisStates[i] == m1 || subspace.basisStates[i] == m2)
            psi(i) = 1.0 / std::sqrt(2.0);
    if (std::abs(psi.norm() - 1.0) > 1e-12)
        throw std::runtime_error("mis_solution_state: alternating masks missing from subspace");
    return QuantumState::pure(psi);
}

QuantumState mis_solution_state_full(const MisSpec& spec) {
    if (!spec.graph.isRing() || spec.graph.nodes % 2 != 0)
        throw std::invalid_argument("mis_solution_state_full: target known only for even rings");
    const auto [m1, m2] = ring_alternating_masks(spec.graph.nodes);
    Vector psi = Vector::Zero(1u << spec.graph.nodes);
    psi(m1) = 1.0 / std::sqrt(2.0);
    psi(m2) = 1.0 / std::sqrt(2.0);
    return QuantumState::pure(psi);
}

int independence_number(const Graph& graph) {
    graph.validate();
    int best = 0;
    const std::uint32_t total = 1u << graph.nodes;
    for (std::uint32_t mask = 0; mask < total; ++mask)
        if (independent(mask, graph)) best = std::max(best, popcount(mask));
    return best;
}

LindbladModel mis_subspace_model(const MisSpec& spec, const BlockadeSubspace& subspace) {
    LindbladModel model;
    model.dim = subspace.dim;
    model.hamiltonianAt = [spec, subspace](double t) {
        return mis_hamiltonian_projected(spec, subspace, t);
    };
    return model;
}

LindbladModel mis_full_model(const MisSpec& spec) {
    LindbladModel model;
    model.dim = 1 << spec.graph.nodes;
    model.hamiltonianAt = [spec](double t) { return mis_hamiltonian_full(spec, t); };
    return model;
}

namespace {

std::uint32_t rotate_mask(std::uint32_t mask, int shift, int n) {
    const std::uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1u);
    return ((mask << shift) | (mask >> (n - shift))) & full;
}

std::uint32_t reflect_mask(std::uint32_t mask, int n) {
    std::uint32_t out = 0;
    for (int i = 0; i < n; ++i)
        if (mask >> i & 1u) out |= 1u << (n - 1 - i);
    return out;
}

std::uint32_t dihedral_canonical(std::uint32_t mask, int n) {
    std::uint32_t best = mask;
    for (int s = 0; s < n; ++s) {
        best = std::min(best, rotate_mask(mask, s, n));
        best = std::min(best, rotate_mask(reflect_mask(mask, n), s, n));
    }
    return best;
}

} // namespace

RingSector build_ring_sector(int nodes) {
    if (nodes % 2 != 0) throw std::invalid_argument("build_ring_sector: even rings only");
    const Graph graph = Graph::ring(nodes);
    const BlockadeSubspace sub = build_blockade_subspace(graph);

    RingSector sector;
    sector.nodes = nodes;

    std::map<std::uint32_t, std::vector<std::uint32_t>> orbits;
    for (const std::uint32_t mask : sub.basisStates)
        orbits[dihedral_canonical(mask, nodes)].push_back(mask);

    std::map<std::uint32_t, int> orbitIndex;
    for (const auto& [rep, members] : orbits) {
        orbitIndex[rep] = sector.dim;
        sector.orbitRep.push_back(rep);
        sector.orbitSize.push_back(static_cast<int>(members.size()));
        ++sector.dim;
    }

    sector.xSym = Matrix::Zero(sector.dim, sector.dim);
    sector.zDiag = RealVector::Zero(sector.dim);
    std::map<std::uint32_t, int> subIndex;
    for (int i = 0; i < sub.dim; ++i) subIndex[sub.basisStates[i]] = i;

    for (int col = 0; col < sector.dim; ++col) {
        const std::uint32_t rep = sector.orbitRep[col];
        sector.zDiag(col) = nodes - 2 * popcount(rep);
        for (int i = 0; i < nodes; ++i) {
            const std::uint32_t flipped = rep ^ (1u << i);
            if (!subIndex.count(flipped)) continue; // flip leaves the blockade subspace
            const int row = orbitIndex.at(dihedral_canonical(flipped, nodes));
            sector.xSym(row, col) +=
                std::sqrt(static_cast<double>(sector.orbitSize[col]) / sector.orbitSize[row]);
        }
    }

    sector.initialIndex = orbitIndex.at(0);
    const auto [m1, m2] = ring_alternating_masks(nodes);
    sector.targetIndex = orbitIndex.at(dihedral_canonical(m1, nodes));
    if (orbitIndex.at(dihedral_canonical(m2, nodes)) != sector.targetIndex)
        throw std::runtime_error("build_ring_sector: alternating masks not one orbit");
    return sector;
}

Matrix RingSector::embedding(const BlockadeSubspace& subspace) const {
    std::map<std::uint32_t, int> subIndex;
    for (int i = 0; i < subspace.dim; ++i) subIndex[subspace.basisStates[i]] = i;
    std::map<std::uint32_t, int> orbitIndex;
    for (int i = 0; i < dim; ++i) orbitIndex[orbitRep[i]] = i;

    Matrix s = Matrix::Zero(subspace.dim, dim);
    for (const std::uint32_t mask : subspace.basisStates) {
        const int orb = orbitIndex.at(dihedral_canonical(mask, nodes));
        s(subIndex.at(mask), orb) = 1.0 / std::sqrt(static_cast<double>(orbitSize[orb]));
    }
    return s;
}

LindbladModel mis_sector_model(const RingSector& sector, const ControlSet& controls) {
    LindbladModel model;
    model.dim = sector.dim;
    const Matrix x = sector.xSym;
    const RealVector z = sector.zDiag;
    model.hamiltonianAt = [controls, x, z](double t) {
        const double omega = evaluate(controls.byLabel("Omega"), t);
        const double delta = evaluate(controls.byLabel("Delta"), t);
        Operator h = omega * x;
        h.diagonal() -= (delta * z).cast<Complex>();
        return h;
    };
    return model;
}

QuantumState sector_initial_state(const RingSector& sector) {
    Vector psi = Vector::Zero(sector.dim);
    psi(sector.initialIndex) = 1.0;
    return QuantumState::pure(psi);
}

QuantumState sector_target_state(const RingSector& sector) {
    Vector psi = Vector::Zero(sector.dim);
    psi(sector.targetIndex) = 1.0;
    return QuantumState::pure(psi);
}

} // namespace adiqoc
