#pragma once

#define OPMEAS_VERSION "0.1.0"
