# Keeps tests/ on sys.path so test modules can import the local oracles
# module; no shared fixtures needed so far.
