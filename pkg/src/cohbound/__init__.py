"""l1-norm coherence, superadditivity bounds and their numerical audit."""
