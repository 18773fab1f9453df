// Compares the OpenMP enumeration kernel against the serial reference on the
// two standard rank-3 lattices.  Run with CMLAT_THREADS=<n> to pick the team
// size; the serial path always uses one thread.

#include <chrono>
#include <cstdio>

#include "cmlat/cm_field.hpp"
#include "cmlat/hermitian.hpp"
#include "cmlat/roots.hpp"

using namespace cmlat;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

void bench(const char* name, const HermitianLattice& lat, long bound) {
    KVector x = kvector_zero(lat.field(), lat.rank());
    x[0] = FieldElement::one(lat.field());

    auto t0 = clk::now();
    ShortRootList serial = enumerate_short_roots_near_serial(lat, x, bound);
    double ts = seconds_since(t0);

    t0 = clk::now();
    ShortRootList parallel = enumerate_short_roots_near(lat, x, bound);
    double tp = seconds_since(t0);

    bool equal = serial.roots == parallel.roots;
    std::printf("%-28s bound %3ld  roots %6zu  serial %7.3fs  "
                "parallel %7.3fs (%d threads)  speedup %5.2fx  %s\n",
                name, bound, parallel.roots.size(), ts, tp, parallel.threads,
                tp > 0 ? ts / tp : 0.0, equal ? "match" : "MISMATCH");
    if (!equal) std::exit(1);
}

}  // namespace

int main() {
    const CMField& eis = CMField::get(FieldKind::Cyclotomic, 3);
    KVector d(3, FieldElement::one(eis));
    d[0] = -FieldElement::one(eis);
    bench("eisenstein ball, warmup", HermitianLattice::diagonal(eis, d), 6);
    bench("eisenstein ball", HermitianLattice::diagonal(eis, d), 20);

    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5, 0);
    FieldElement mu(c5, {-1, 0, -1, -1});
    HermitianLattice z5 = HermitianLattice::diagonal(
        c5, {-mu, FieldElement::one(c5), FieldElement::one(c5)});
    bench("zeta5 golden-ratio ball", z5, 12);
    return 0;
}
