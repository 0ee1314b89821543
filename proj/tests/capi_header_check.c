/* Compile-only check that the public header is valid C. */
#include "pdmpstop/pdmpstop.h"

pdmpstop_status pdmpstop_header_check_status(void) { return PDMPSTOP_OK; }
