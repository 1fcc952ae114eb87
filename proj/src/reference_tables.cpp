#include "nmrqc/harness.hpp"

namespace nmrqc {

namespace {

using Row = std::vector<Cell>;

const std::vector<std::string> kQaRows = {"00", "10", "01", "11", "singlet"};
const std::vector<Cell> kQaIdeal = {{0, 0}, {1, 1}, {0, 1}, {1, 0}, {1, 1}};
const std::vector<std::string> kGroverRows = {"0", "1", "2", "3"};
const std::vector<Cell> kGroverIdeal = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
const std::vector<std::string> kSColumns = {"8", "16", "32", "64", "256"};

Row repeat(Cell c) { return Row(5, c); }

ReferenceTable qa_table(std::string name, std::vector<Row> cells) {
  return {std::move(name), kSColumns, kQaRows, kQaIdeal, std::move(cells), {}, 0.01};
}

ReferenceTable grover_table(std::string name, std::vector<Row> cells) {
  ReferenceTable t{std::move(name), kSColumns, kGroverRows, kGroverIdeal, std::move(cells), {},
                   0.01};
  const char* why = "item 1 and 3 entries at s=256 contradict the ideal answers and the s=64 trend";
  t.excluded = {{1, 4, why}, {3, 4, why}};
  return t;
}

}  // namespace

std::optional<ReferenceTable> reference_table(std::string_view name) {
  if (name == "table5") {
    return qa_table("table5", {repeat({0, 0}),
                               repeat({1, 1}),
                               repeat({0, 1}),
                               repeat({1, 0}),
                               {{.90, 1}, {.03, 1}, {.58, 1}, {.88, 1}, {.99, 1}}});
  }
  if (name == "table6") {
    return qa_table("table6", {{{.24, .76}, {.50, .26}, {.20, .07}, {.06, .02}, {0, 0}},
                               {{.76, .24}, {.50, .74}, {.80, .93}, {.95, .98}, {1, 1}},
                               {{.24, .24}, {.51, .74}, {.20, .93}, {.06, .98}, {0, 1}},
                               {{.76, .76}, {.50, .26}, {.80, .07}, {.95, .02}, {1, 0}},
                               {{.98, .24}, {.95, .74}, {.98, .93}, {.99, .98}, {1, 1}}});
  }
  if (name == "table7") {
    return qa_table("table7", {{{.23, .76}, {.50, .26}, {.20, .07}, {.06, .02}, {0, 0}},
                               {{.77, .24}, {.50, .74}, {.80, .93}, {.95, .98}, {1, 1}},
                               {{.23, .24}, {.51, .74}, {.20, .93}, {.06, .98}, {0, 1}},
                               {{.77, .76}, {.50, .26}, {.80, .07}, {.95, .02}, {1, 0}},
                               {{.79, .24}, {.55, .74}, {.82, .93}, {.95, .98}, {1, 1}}});
  }
  if (name == "table8") {
    return qa_table("table8", {{{0, .03}, {0, .01}, {0, 0}, {0, 0}, {0, 0}},
                               repeat({1, 1}),
                               {{0, .97}, {0, .99}, {0, 1}, {0, 1}, {0, 1}},
                               repeat({1, 0}),
                               {{.02, .98}, {.45, 1}, {.17, 1}, {.70, 1}, {.98, 1}}});
  }
  if (name == "table9") {
    return grover_table("table9", {{{.48, .53}, {.15, .16}, {.04, .04}, {.01, .01}, {0, 0}},
                                   {{.52, .50}, {.85, .15}, {.96, .04}, {.99, .01}, {1, 1}},
                                   {{.55, .48}, {.15, .84}, {.04, .96}, {.01, .99}, {0, 1}},
                                   {{.45, .50}, {.85, .85}, {.96, .96}, {.99, .99}, {1, 0}}});
  }
  if (name == "grover-static") {
    return grover_table("grover-static",
                        {{{.92, .91}, {.39, .35}, {.11, .10}, {.03, .03}, {0, 0}},
                         {{.09, .91}, {.61, .36}, {.89, .10}, {.97, .03}, {1, 1}},
                         {{.95, .10}, {.36, .65}, {.10, .90}, {.03, .98}, {0, 1}},
                         {{.05, .09}, {.64, .64}, {.90, .90}, {.97, .97}, {1, 0}}});
  }
  if (name == "table10") {
    ReferenceTable t{"table10",
                     {"256(1)", "256(2)", "256(3)", "256(4)", "256(5)"},
                     kQaRows,
                     kQaIdeal,
                     {{{0, .52}, {0, .16}, {0, 0}, {0, .13}, {0, .48}},
                      {{1, .48}, {1, .87}, {1, 1}, {1, .84}, {1, .48}},
                      {{0, .48}, {0, .84}, {0, 0}, {0, .87}, {0, .52}},
                      {{1, .52}, {1, .13}, {1, 1}, {1, .16}, {1, .52}},
                      {{.99, .50}, {.09, .85}, {.99, 1}, {.01, .85}, {.99, .50}}},
                     {},
                     0.02};
    const char* why = "unperturbed column must equal the s=256 column of table5";
    t.excluded = {{2, 2, why}, {3, 2, why}};
    return t;
  }
  return std::nullopt;
}

}  // namespace nmrqc
