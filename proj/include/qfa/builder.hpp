#ifndef QFA_BUILDER_HPP
#define QFA_BUILDER_HPP

#include <map>
#include <string>
#include <vector>

#include "qfa/machine.hpp"

namespace qfa {

/// Builds k-head machines whose evolution matrix is unitary for every input
/// by construction: each target state has one fixed in-direction, and for
/// every scanned-symbol tuple the state map is a permutation, allowing
/// orthogonal blocks in place of single transitions. Unspecified
/// (state, tuple) pairs are completed to permutations canonically.
class PermBuilder {
 public:
  PermBuilder(Kind kind, int heads, std::vector<std::string> alphabet);

  int state(const std::string& name, char cls, std::vector<int> indir);
  void initial(const std::string& name);
  void single(const std::vector<std::string>& scan, const std::string& from,
              const std::string& to);
  /// Columns: source j maps to sum_i weights[i][j] |target_i>.
  void block(const std::vector<std::string>& scan, const std::vector<std::string>& from,
             const std::vector<std::string>& to, const std::vector<std::vector<AmpExpr>>& weights);
  MachineSpec finish();

 private:
  struct Block {
    std::vector<int> sources, targets;
    std::vector<std::vector<AmpExpr>> weights;
  };
  void add_block(const std::vector<std::string>& scan, Block b);
  void enumerate_tuples(int h, std::vector<int>& cur, std::vector<std::vector<int>>* out);

  int heads_;
  MachineSpec m_;
  std::vector<std::vector<int>> indirs_;
  std::map<std::vector<int>, std::vector<Block>> sigma_;
};

}  // namespace qfa

#endif
