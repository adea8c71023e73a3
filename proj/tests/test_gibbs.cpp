int placeholder_test_gibbs;
