#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fsel/criteria.hpp"
#include "fsel/dataset.hpp"
#include "fsel/infotheory.hpp"

// Small hand-built distributions and datasets with known answers. Binary
// features use code 0 for the symbol -1 and code 1 for +1; the same holds for
// the two-class labels.
namespace fsel::fixtures {

/// Balanced classes. X1 is always +1 under C=+1 and a fair coin under C=-1;
/// X2 is +1 with probability 0.9 / 0.3. Features are independent given C.
JointPmf balanced_pair_pmf();
/// 40 rows realizing balanced_pair_pmf exactly.
DiscreteDataset balanced_pair_dataset();

/// Pr(C=+1) = 0.9. X1 is always +1 under C=+1 and a fair coin under C=-1;
/// X2 is +1 with probability 0.8 under C=+1 and always -1 under C=-1.
JointPmf skewed_pair_pmf();
/// 100 rows realizing skewed_pair_pmf exactly.
DiscreteDataset skewed_pair_dataset();

/// Four features in two independent blocks {X1,X2} and {X3,X4}. X1 and X2
/// are useless alone but worth 0.4 together; X3 and X4 are worth 0.2 and 0.25
/// alone and 0.45 together. Greedy elimination keeps the wrong pair.
SubsetOracle interaction_blocks_oracle();
/// The same instance as relevance plus three-way terms.
MiMatrix interaction_blocks_terms();

/// C = X1 xor X2 with uniform X1, X2.
JointPmf xor_pmf();

/// C is a fair coin independent of (X1, X2); X2 copies X1 with probability
/// 0.9. Pairwise redundancy is positive while every relevance is zero.
JointPmf class_blind_pmf();

/// X1, X2 uniform with C = X1 xor X2 in 200 balanced rows, followed by
/// `noise` random binary columns with small spurious relevance.
DiscreteDataset xor_noise_dataset(std::size_t noise = 4, std::uint64_t seed = 11);

/// Four classes fully determined by two binary features (columns 2 and 5),
/// mixed with eight random binary columns; 400 rows.
DiscreteDataset separable_dataset(std::uint64_t seed = 5);

/// Full-support pmf over `features` variables (alphabets 2..max_card) and a
/// binary class, drawn from a fixed generator.
JointPmf seeded_pmf(std::uint64_t seed, std::size_t features, int max_card = 3);

/// The pmfs above plus two seeded ones, for identity checks.
std::vector<std::pair<std::string, JointPmf>> bundled_pmfs();

/// Writes codes as CSV with a header; the label column is named "class".
void write_csv(const DiscreteDataset& data, std::ostream& out);

}  // namespace fsel::fixtures
