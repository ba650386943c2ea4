"""
Figure builders for rate region boundaries
"""
