"""Exact, certificate-emitting homological algebra for pro-ind systems of supercomplexes."""
