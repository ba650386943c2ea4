"""
Rate region computation services
"""
