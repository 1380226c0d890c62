"""Directory for utils files """
