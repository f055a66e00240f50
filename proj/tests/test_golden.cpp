#include <doctest.h>

#include "epddl/backend_mar.hpp"
#include "epddl/backend_pdkb.hpp"
#include "epddl/grounder.hpp"
#include "test_util.hpp"

// Byte-exact snapshots of the emitted artifacts. A deliberate format
// change means regenerating the files under tests/data/golden/.

using namespace epddl;

TEST_CASE("pdkb output matches the golden files byte for byte") {
    ValidatedProblem p = testutil::coin_problem();
    auto pdkb = emit_pdkb(p);
    REQUIRE(pdkb.ok());
    CHECK(pdkb.value->domain_text ==
          testutil::data_file("golden/toyinstance.pdkb-domain.pddl"));
    CHECK(pdkb.value->instance_text ==
          testutil::data_file("golden/toyinstance.pdkb-problem.pddl"));

    PdkbOptions faithful;
    faithful.listing_faithful = true;
    auto pdkb_f = emit_pdkb(p, faithful);
    REQUIRE(pdkb_f.ok());
    CHECK(pdkb_f.value->domain_text ==
          testutil::data_file("golden/toyinstance.faithful.pdkb-domain.pddl"));
}

TEST_CASE("mar output matches the golden file byte for byte") {
    auto mar = emit_mar(ground(testutil::coin_problem()));
    REQUIRE(mar.ok());
    CHECK(mar.value->text == testutil::data_file("golden/toyinstance.mar"));
}

TEST_CASE("the grounded debug dump matches the golden file") {
    CHECK(dump_grounded(ground(testutil::coin_problem())) ==
          testutil::data_file("golden/toyinstance.grounded.txt"));
}
