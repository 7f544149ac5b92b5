# Ensures this directory (and the oracles module) is importable from tests.
