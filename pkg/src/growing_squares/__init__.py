"""Kinetic maintenance of disjoint growing squares and agglomerative glyph clustering."""
