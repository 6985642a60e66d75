"""Independent reference computations used only by the test suite."""
