// One line per criterion: id, PASS/FAIL, name, detail. Exit status 1 when any fails.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "spinglass.h"

int main(int argc, char** argv) {
  const char* dir = "configs";
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--config-dir") && i + 1 < argc)
      dir = argv[++i];
    else
      ids.push_back(std::atoi(argv[i]));
  }
  if (ids.empty())
    for (int k = 1; k <= sg_accept_count(); ++k) ids.push_back(k);
  int failed = 0;
  for (int id : ids) {
    sg_criterion c;
    if (sg_accept_run(id, dir, &c) != SG_OK) {
      std::printf("criterion %2d FAIL  %s\n", id, sg_last_error());
      ++failed;
      continue;
    }
    std::printf("criterion %2d %s  %-24s %s [%.1fs]\n", c.id, c.pass ? "PASS" : "FAIL", c.name, c.detail, c.seconds);
    std::fflush(stdout);
    failed += !c.pass;
  }
  return failed ? 1 : 0;
}
