"""
The forestpat command
=====================

Everything above is also reachable from the shell. This drives the same
entry point in-process.
"""

import tempfile

from forestpat.cli import main

main(["count", "--set", "213,231", "--n", "0..6"])

with tempfile.TemporaryDirectory() as cache:
    # the second call reads the cached record
    main(["--cache-dir", cache, "sequence", "extranice", "--n", "2..16", "--compare", "A002105"])
    main(["--cache-dir", cache, "sequence", "extranice", "--n", "2..16", "--compare", "A002105"])

code = main(["clusters", "compare", "--lhs", "2134", "--rhs", "2314", "--max-n", "8"])
print("exit code", code)
