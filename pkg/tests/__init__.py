"""
Tests package for quatgraph modules.
"""
