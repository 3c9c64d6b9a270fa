"""Occupational Health Problem Exposome Package"""
