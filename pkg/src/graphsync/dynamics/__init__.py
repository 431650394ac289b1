"""Vector fields, reduced systems and integration on graph networks."""
