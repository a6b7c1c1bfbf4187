#include "colupi/random.hpp"

#include <cmath>
#include <stdexcept>

namespace colupi {

PartitionMatrix random_partition(Eigen::Index rows, int clusters, std::uint64_t seed) {
    if (clusters < 2) throw std::invalid_argument("random_partition: K must be >= 2");
    if (rows < 1) throw std::invalid_argument("random_partition: N must be >= 1");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PartitionMatrix p;
    p.resp.resize(rows, clusters);
    for (Eigen::Index i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (int k = 0; k < clusters; ++k) {
            double u;
            do {
                u = unit(rng);
            } while (u <= 0.0);
            const double g = -std::log(u);  // Exp(1); normalized = Dirichlet(1,...,1)
            p.resp(i, k) = g;
            sum += g;
        }
        for (int k = 0; k < clusters; ++k) p.resp(i, k) /= sum;
    }
    return p;
}

}  // namespace colupi
