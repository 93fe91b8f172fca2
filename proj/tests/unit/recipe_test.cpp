#include <gtest/gtest.h>

#include "archemist/error.hpp"
#include "archemist/recipe/recipe.hpp"
#include "testlab.hpp"

using namespace archemist;
using namespace archemist::recipe;

namespace {

ParseResult parse_text(const std::string& text) { return parse_recipe(RecipeDoc{text, "test.yaml"}); }

std::string golden() { return testlab::read_file(testlab::data_path("recipes/sample_recipe.yaml")); }

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  if (at == std::string::npos) throw std::runtime_error("fixture text not found: " + from);
  return text.replace(at, from.size(), to);
}

// 1-based line of the first occurrence of `needle`.
int line_of(const std::string& text, const std::string& needle) {
  auto at = text.find(needle);
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(at), '\n'));
}

}  // namespace

TEST(ParseRecipe, SampleRecipeGolden) {
  auto r = parse_text(golden());
  ASSERT_TRUE(r.ok()) << (r.diagnostics.empty() ? "" : format(r.diagnostics[0]));
  const Recipe& rec = *r.recipe;
  EXPECT_EQ(rec.name, "sample_recipe");
  EXPECT_EQ(rec.solids, std::set<std::string>{"NaCl"});
  EXPECT_EQ(rec.liquids, std::set<std::string>{"water"});
  ASSERT_EQ(rec.stations.size(), 2u);
  EXPECT_EQ(rec.flow.ids(), (std::vector<std::string>{"start", "solid_disp", "liquid_disp", "end"}));

  const OperationSpec* op = rec.op("solid_dispensing_quantos_QS2", "dispense_solid");
  ASSERT_NE(op, nullptr);
  const ParamValue* mass = op->find("mass");
  ASSERT_NE(mass, nullptr);
  EXPECT_EQ(mass->quantity, (Quantity{15, Unit::mg}));
  EXPECT_EQ(op->output.name, "final_weight");
}

TEST(ParseRecipe, VerbatimSampleRecipeReportsStationTypo) {
  auto r = load_recipe_file(testlab::fixture_path("sample_recipe_verbatim.yaml"));
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::UnknownStation);
  EXPECT_EQ(r.diagnostics[0].suggestion, "solid_dispensing_quantos_QS2");
}

TEST(ParseRecipe, KeyCaseIsTolerated) {
  auto mixed = load_recipe_file(testlab::fixture_path("sample_recipe_mixed_case.yaml"));
  auto canon = parse_text(golden());
  ASSERT_TRUE(mixed.ok());
  EXPECT_EQ(*mixed.recipe, *canon.recipe);
}

TEST(ParseRecipe, MinimalStartToEnd) {
  auto r = parse_text(R"(chemical_recipe:
  name: nothing
  materials:
    liquids: {}
    solids: {}
  stations: {}
  stationFlow:
    start:
      onSuccess: end
      onFail: end
    end:
)");
  ASSERT_TRUE(r.ok()) << format(r.diagnostics.at(0));
  EXPECT_TRUE(r.recipe->stations.empty());
  EXPECT_EQ(r.recipe->flow.nodes.size(), 2u);
}

TEST(ParseRecipe, DanglingTargetSuggestsNearestNode) {
  std::string text = replace_once(golden(), "onSuccess: liquid_disp", "onSuccess: liquid_dispp");
  auto r = parse_text(text);
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  const Diagnostic& d = r.diagnostics[0];
  EXPECT_EQ(d.code, DiagCode::DanglingTarget);
  EXPECT_EQ(category(d.code), DiagCategory::semantic);
  EXPECT_EQ(d.suggestion, "liquid_disp");
  EXPECT_EQ(d.pos.line, line_of(text, "liquid_dispp"));
  EXPECT_GT(d.pos.column, 0);
}

TEST(ParseRecipe, SyntaxErrorHasPosition) {
  auto r = parse_text("chemical_recipe:\n  name: [unclosed\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::Syntax);
  EXPECT_GT(r.diagnostics[0].pos.line, 0);
}

TEST(ParseRecipe, UndeclaredMaterial) {
  auto r = parse_text(replace_once(golden(), "solid: NaCl", "solid: KCl"));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::UndeclaredMaterial);
}

TEST(ParseRecipe, NonPositiveQuantity) {
  auto r = parse_text(replace_once(golden(), "mass: 15", "mass: -15"));
  ASSERT_FALSE(r.ok());
  bool found = false;
  for (const auto& d : r.diagnostics) found |= d.code == DiagCode::NonPositiveQuantity;
  EXPECT_TRUE(found);
}

TEST(ParseRecipe, DiagnosticsAreDeterministic) {
  std::string bad = replace_once(replace_once(golden(), "solid: NaCl", "solid: KCl"), "onFail: end", "onFail: nowhere");
  auto a = parse_text(bad);
  auto b = parse_text(bad);
  EXPECT_EQ(a.diagnostics, b.diagnostics);
  EXPECT_GE(a.diagnostics.size(), 2u);
}

TEST(ValidateFlow, SampleRecipeIsClean) {
  EXPECT_TRUE(validate_flow(parse_text(golden()).recipe->flow).empty());
}

TEST(ValidateFlow, UnreachableEnd) {
  // the only onSuccess edge out of `observe` loops back on itself
  FlowGraph g;
  OperationSpec observe{"observe", {}, OutputSpec{"turbidity", OutcomePredicate{PredicateKind::below, "turbidity", 0.05, 2}}, {}};
  g.nodes.push_back(FlowNode{"start", "", std::nullopt, "observe", "end", {}, {}, {}});
  g.nodes.push_back(FlowNode{"observe", "camera", observe, "observe", "end", {}, {}, {}});
  g.nodes.push_back(FlowNode{"end", "", std::nullopt, "", "", {}, {}, {}});
  auto d = validate_flow(g);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, DiagCode::UnreachableEnd);
}

TEST(ValidateFlow, GuardedCrystallisationLoop) {
  // start -> solid -> liquid -> weigh; weigh fails into heat, heat succeeds back into weigh.
  auto rec = testlab::load_recipe("recipes/crystallisation.yaml");
  const FlowNode* weigh = rec.flow.find("weigh");
  const FlowNode* heat = rec.flow.find("heat");
  ASSERT_TRUE(weigh && heat);
  EXPECT_EQ(weigh->on_fail, "heat");
  EXPECT_EQ(heat->on_success, "weigh");
  EXPECT_TRUE(weigh->guarded());
  EXPECT_TRUE(validate_flow(rec.flow).empty());
}

TEST(ValidateFlow, UnguardedCycleRejected) {
  auto rec = testlab::load_recipe("recipes/crystallisation.yaml");
  for (auto& n : rec.flow.nodes)
    if (n.id == "weigh") n.task->output.predicate.reset();
  auto d = validate_flow(rec.flow);
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(d[0].code, DiagCode::UnguardedCycle);
}

TEST(ValidateFlow, FailCycleRejected) {
  auto rec = testlab::load_recipe("recipes/crystallisation.yaml");
  for (auto& n : rec.flow.nodes)
    if (n.id == "heat") n.on_fail = "weigh";
  auto d = validate_flow(rec.flow);
  bool fail_cycle = false;
  for (const auto& x : d) fail_cycle |= x.code == DiagCode::FailCycle;
  EXPECT_TRUE(fail_cycle);
}

TEST(AdvanceFlow, SampleRecipeEdges) {
  auto rec = *parse_text(golden()).recipe;
  EXPECT_EQ(advance_flow(rec.flow, "solid_disp", true), "liquid_disp");
  EXPECT_EQ(advance_flow(rec.flow, "solid_disp", false), "end");
  EXPECT_EQ(advance_flow(rec.flow, "start", true), "solid_disp");
}

TEST(AdvanceFlow, EndAndUnknownThrow) {
  auto rec = *parse_text(golden()).recipe;
  try {
    advance_flow(rec.flow, "end", true);
    FAIL() << "expected InvalidCursor";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidCursor);
  }
  EXPECT_THROW(advance_flow(rec.flow, "nowhere", true), Error);
}

TEST(Serialize, ShippedRecipesRoundTrip) {
  for (const char* name : {"recipes/sample_recipe.yaml", "recipes/solubility.yaml", "recipes/crystallisation.yaml"}) {
    auto rec = testlab::load_recipe(name);
    std::string text = serialize(rec);
    auto again = parse_text(text);
    ASSERT_TRUE(again.ok()) << name << "\n" << text;
    EXPECT_EQ(*again.recipe, rec) << name;
    EXPECT_EQ(serialize(*again.recipe), text) << name;
  }
}

TEST(Diagnostics, FormatCarriesCodeAndPosition) {
  Diagnostic d{DiagCode::DanglingTarget, {3, 7}, "flow node 'x' onSuccess targets unknown node 'y'", "z"};
  std::string s = format(d, "r.yaml");
  EXPECT_EQ(s.rfind("r.yaml:3:7: error[", 0), 0u);
  EXPECT_NE(s.find("did you mean 'z'?"), std::string::npos);
}

TEST(Diagnostics, CodesAreUnique) {
  std::set<std::string_view> ids;
  for (int c = 0; c <= static_cast<int>(DiagCode::UnguardedCycle); ++c) ids.insert(code_id(static_cast<DiagCode>(c)));
  EXPECT_EQ(ids.size(), static_cast<std::size_t>(DiagCode::UnguardedCycle) + 1);
}
