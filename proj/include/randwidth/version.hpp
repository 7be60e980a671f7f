#pragma once

#define RANDWIDTH_VERSION "0.1.0"
