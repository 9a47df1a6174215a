#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mss/mgraph.hpp"
#include "mss/oracle.hpp"

namespace mss {

// MaxCut decision instance: unweighted simple graph plus the threshold k.
struct MaxCutInstance {
  StageGraph graph;
  std::size_t k = 0;
};

struct ReductionOutput {
  ProblemInstance instance;
  std::size_t kappa = 0;  // |E| + k
  // original vertex label / edge token -> gadget labels created for it
  std::map<std::string, std::vector<std::string>> vertex_witness;
  std::map<std::string, std::vector<std::string>> edge_witness;
};

// "u+v" with endpoints in normalized order; used in gadget labels.
std::string edge_token(const ElementId& e);

// Two-stage MMinCut instance: per original vertex a bundle of s-t paths
// through a hub, per original edge two s-t paths through the reused middle
// edges. Unit weights; yes-instance iff the multistage profit reaches kappa.
ReductionOutput reduce_to_mmincut(const MaxCutInstance& mc);

// Two-stage MWBMaxCut instance from a max-degree-3 graph: 9-cycle vertex
// gadgets with a hub, 8-cycle edge gadgets; shared edges weigh 1, the rest 4.
ReductionOutput reduce_to_mwbmaxcut(const MaxCutInstance& mc);

// Two-stage MMinBVC instance from a max-degree-3 graph: 6-cycle vertex
// gadgets, 4-cycle edge gadgets on the same vertices, unit vertex weights.
ReductionOutput reduce_to_mminbvc(const MaxCutInstance& mc);

struct ReductionCheck {
  bool maxcut_yes = false;
  bool multistage_yes = false;
  bool equivalent = false;
};

// Brute-forces both sides of the equivalence. The MaxCut side enumerates
// bipartitions (|V| <= 6); the multistage side runs exact_multistage on the
// constructed instance under the supplied caps.
ReductionCheck verify_reduction(const MaxCutInstance& mc,
                                const ReductionOutput& out,
                                const OracleConfig& config = OracleConfig{});

// max |delta(U)| by enumeration (unweighted).
std::size_t max_cut_value(const StageGraph& graph);

enum class VertexVariantMode { LargestPartition, QPrime };

// Minimum s-t cut on the vertex side: per stage the separating partition
// containing s. LargestPartition returns the inclusion-maximal minimum
// partition per stage (optimal for intersection profit, since minimum
// partitions are closed under union). QPrime solves one min cut on the
// stage-copy network with unit-weight copy edges between shared vertices,
// maximizing agreement on both sides of the partition.
SolutionSequence vertex_variant_min_cut(const ProblemInstance& inst,
                                        VertexVariantMode mode);

}  // namespace mss
