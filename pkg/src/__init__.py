"""
quatgraph - classifying graphs of definite quaternion orders over Q.
"""
