"""End-to-end tests of the park-sim command line."""
