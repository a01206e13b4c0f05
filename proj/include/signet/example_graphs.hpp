#pragma once

#include "signet/signed_graph.hpp"

namespace signet::examples {

/// 3-node signed triangle with gauge (1,-1,1) and the node-swap (1 2) as
/// a signed automorphism fixing node 3.
inline SignedGraph swap_triangle() {
    return SignedGraph(3, {{1, 2, -1.0}, {1, 3, 1.0}, {2, 3, -1.0}});
}

/// Structurally balanced 4-node graph whose node-4-grounded Laplacian is
///   [[2,-1,0],[-1,3,1],[0,1,2]].
/// Certifying gauge (1,1,-1,1).
inline SignedGraph balanced_four() {
    return SignedGraph(4, {{1, 2, 1.0}, {2, 3, -1.0}, {1, 4, 1.0}, {2, 4, 1.0}, {3, 4, -1.0}});
}

/// Same graph with the (2,3) edge sign flipped; structurally unbalanced,
/// grounded Laplacian [[2,-1,0],[-1,3,-1],[0,-1,2]].
inline SignedGraph unbalanced_four() {
    return SignedGraph(4, {{1, 2, 1.0}, {2, 3, 1.0}, {1, 4, 1.0}, {2, 4, 1.0}, {3, 4, -1.0}});
}

/// Balanced 4-node graph with a follower-pair symmetry: swapping nodes 1
/// and 2 is an edge-sign-preserving automorphism fixing nodes 3 and 4.
/// Gauge (1,1,-1,1).
inline SignedGraph symmetric_pair_four() {
    return SignedGraph(4, {{1, 3, -1.0}, {2, 3, -1.0}, {1, 4, 1.0}, {2, 4, 1.0}, {3, 4, -1.0}});
}

/// symmetric_pair_four with one edge sign flipped; unbalanced, the swap
/// is still a magnitude automorphism.
inline SignedGraph symmetric_pair_four_flipped() {
    return SignedGraph(4, {{1, 3, 1.0}, {2, 3, -1.0}, {1, 4, 1.0}, {2, 4, 1.0}, {3, 4, -1.0}});
}

/// Balanced 6-node oscillator network with bipartition {1,2,3}/{4,5,6}:
/// positive triangles inside each camp, negative matching across.
inline SignedGraph oscillator_six() {
    return SignedGraph(6, {{1, 2, 1.0},
                           {2, 3, 1.0},
                           {1, 3, 1.0},
                           {4, 5, 1.0},
                           {5, 6, 1.0},
                           {4, 6, 1.0},
                           {1, 4, -1.0},
                           {2, 5, -1.0},
                           {3, 6, -1.0}});
}

}  // namespace signet::examples
