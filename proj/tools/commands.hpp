#pragma once

namespace g3ad_cli {

int run(int argc, char** argv);

}  // namespace g3ad_cli
